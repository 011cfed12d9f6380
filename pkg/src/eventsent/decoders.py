"""Search-based realizers: plain beam search, Monte Carlo beam search with
playout re-scoring, and beam search constrained by a matched-token finite
state machine."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .metrics import bleu4
from .ngram import ConditionalSequenceModel
from .types import EventTuple, GeneralizedSentence, SLOT_NAMES


def _uniform_slot_weights() -> np.ndarray:
    return np.full(len(SLOT_NAMES), 1.0 / len(SLOT_NAMES))


@dataclass
class MCBeamConfig:
    beam_width: int = 5
    playouts_per_node: int = 3
    alpha: float = 0.5
    max_length: int = 12
    unigram_weights: np.ndarray = field(default_factory=_uniform_slot_weights)
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.playouts_per_node < 1:
            raise ValueError("playouts_per_node must be >= 1")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        self.unigram_weights = np.asarray(self.unigram_weights, dtype=float)
        if abs(self.unigram_weights.sum() - 1.0) > 1e-9:
            raise ValueError("unigram slot weights must sum to 1")


def _candidate_logprobs(model: ConditionalSequenceModel, event, prefix) -> np.ndarray:
    """Log-probabilities with the begin and unknown tokens masked out."""
    vec = model.next_distribution(event, prefix)
    logs = np.log(vec)
    logs[model.vocab.begin_id] = -np.inf
    logs[model.vocab.unk_id] = -np.inf
    return logs


def _ids(model: ConditionalSequenceModel, tokens: Sequence[str]) -> tuple[int, ...]:
    return tuple(model.vocab.id_of(t) for t in tokens)


# --- standard beam search ----------------------------------------------------


def beam_decode(
    model: ConditionalSequenceModel,
    event: Optional[EventTuple],
    width: int = 5,
    max_length: int = 12,
) -> GeneralizedSentence:
    """Highest-logprob finished hypothesis under a width-`width` beam.
    Ties break lexicographically by token id.  Always returns a sentence:
    if nothing finishes within `max_length`, the best partial hypothesis
    is closed with the end token."""
    if width < 1:
        raise ValueError("width must be >= 1")
    end = model.vocab.end_id
    active: list[tuple[tuple[str, ...], float]] = [((), 0.0)]
    finished: list[tuple[tuple[str, ...], float]] = []
    # one extra iteration lets max_length-token hypotheses take the end
    # transition instead of being cut off unfinished
    for _ in range(max_length + 1):
        if not active:
            break
        expanded: list[tuple[tuple[str, ...], float]] = []
        for tokens, lp in active:
            logs = _candidate_logprobs(model, event, tokens)
            for tid in range(len(logs)):
                if not math.isfinite(logs[tid]):
                    continue
                new_lp = lp + float(logs[tid])
                if tid == end:
                    finished.append((tokens, new_lp))
                elif len(tokens) < max_length:
                    expanded.append((tokens + (model.vocab.tokens[tid],), new_lp))
        expanded.sort(key=lambda h: (-h[1], _ids(model, h[0])))
        active = expanded[:width]
    if not finished:
        # close the best partial hypothesis
        tokens, lp = active[0]
        logs = _candidate_logprobs(model, event, tokens)
        finished.append((tokens, lp + float(logs[end])))
    finished.sort(key=lambda h: (-h[1], _ids(model, h[0])))
    return list(finished[0][0])


# --- Monte Carlo beam search --------------------------------------------------


def playout_score(
    event: EventTuple, sequence: Sequence[str], weights: np.ndarray
) -> float:
    """Mean of (a) BLEU up to 4-grams of the sequence against the event
    token string and (b) the slot-weighted unigram match score."""
    if not sequence:
        return 0.0
    ref = event.tokens()
    part_a = bleu4(sequence, [ref]) if ref else 0.0
    part_b = 0.0
    present = set(sequence)
    for i, (_, tok) in enumerate(event.slots()):
        if tok is not None and tok in present:
            part_b += float(weights[i])
    return 0.5 * (part_a + part_b)


def _sample_playout(
    model: ConditionalSequenceModel,
    event: EventTuple,
    prefix: tuple[str, ...],
    rng: np.random.Generator,
    length_cap: int,
) -> list[str]:
    tokens = list(prefix)
    while len(tokens) < length_cap:
        vec = model.next_distribution(event, tokens)
        vec = vec.copy()
        vec[model.vocab.begin_id] = 0.0
        vec[model.vocab.unk_id] = 0.0
        vec /= vec.sum()
        tid = int(rng.choice(len(vec), p=vec))
        if tid == model.vocab.end_id:
            break
        tokens.append(model.vocab.tokens[tid])
    return tokens


def mc_beam_decode(
    model: ConditionalSequenceModel,
    event: EventTuple,
    cfg: MCBeamConfig,
    trace: Optional[list[dict]] = None,
) -> tuple[GeneralizedSentence, float]:
    """Monte Carlo beam search: every candidate node is re-scored by
    averaged playouts, blended with its previous score as
    ``s_t = alpha * s_{t-1} + (1 - alpha) * mean(playouts)``.
    Reproducible: playout RNG streams derive from
    (seed, step, candidate index, playout index).  Returns the sentence
    of the highest-scoring end node and that node's final score."""
    end = model.vocab.end_id
    # beam entries are (tokens, score, finished)
    beam: list[tuple[tuple[str, ...], float, bool]] = [((), 0.0, False)]
    length_cap = 2 * cfg.max_length
    for step in range(cfg.max_length):
        if all(fin for _, _, fin in beam):
            break
        candidates: list[tuple[tuple[str, ...], float, bool]] = []
        cand_idx = 0
        for tokens, s_prev, fin in beam:
            if fin:
                candidates.append((tokens, s_prev, True))
                continue
            logs = _candidate_logprobs(model, event, tokens)
            order = sorted(range(len(logs)), key=lambda t: (-logs[t], t))
            for tid in order[: cfg.beam_width]:
                if not math.isfinite(logs[tid]):
                    continue
                finished = tid == end
                new_tokens = tokens if finished else tokens + (model.vocab.tokens[tid],)
                scores = []
                for pidx in range(cfg.playouts_per_node):
                    if finished:
                        full = list(new_tokens)
                    else:
                        rng = np.random.default_rng(
                            np.random.SeedSequence(
                                (cfg.rng_seed, step, cand_idx, pidx)
                            )
                        )
                        full = _sample_playout(model, event, new_tokens, rng, length_cap)
                    scores.append(playout_score(event, full, cfg.unigram_weights))
                mean_playout = float(np.mean(scores))
                s_new = cfg.alpha * s_prev + (1.0 - cfg.alpha) * mean_playout
                if trace is not None:
                    trace.append(
                        {
                            "step": step,
                            "tokens": list(new_tokens),
                            "s_prev": s_prev,
                            "playout_scores": scores,
                            "s_new": s_new,
                        }
                    )
                candidates.append((new_tokens, s_new, finished))
                cand_idx += 1
        candidates.sort(key=lambda c: (-c[1], _ids(model, c[0])))
        beam = candidates[: cfg.beam_width]
    ended = [c for c in beam if c[2]] or beam
    best = max(ended, key=lambda c: c[1])
    return list(best[0]), float(best[1])


def learn_playout_weights(
    validation_pairs: Sequence[tuple[EventTuple, GeneralizedSentence]],
    decode_fn: Callable[[EventTuple, np.ndarray], GeneralizedSentence],
    delta: float = 0.1,
    epochs: int = 1,
) -> np.ndarray:
    """Bump the weight of every event slot whose token is missing from
    the decoded output, renormalizing after each event."""
    if not validation_pairs:
        raise ValueError("empty validation set")
    w = _uniform_slot_weights()
    for _ in range(epochs):
        for event, _gold in validation_pairs:
            sentence = set(decode_fn(event, w))
            changed = False
            for i, (_, tok) in enumerate(event.slots()):
                if tok is not None and tok not in sentence:
                    w[i] += delta
                    changed = True
            if changed:
                w /= w.sum()
    return w


# --- FSM-constrained beam search ----------------------------------------------


@dataclass
class ConstraintFSM:
    tokens: list[str]             # distinct constraint tokens t_1..t_n
    min_matched: int
    state_beam_capacity: int = 5  # b: hypotheses kept per state
    expansion_width: int = 5      # B^s: continuations tried per hypothesis
    time_horizon: int = 25

    @property
    def n(self) -> int:
        return len(self.tokens)

    @property
    def num_states(self) -> int:
        return 2 ** self.n

    def accepting(self, state: frozenset[int]) -> bool:
        return len(state) >= self.min_matched

    def successor(self, state: frozenset[int], token: str) -> frozenset[int]:
        for i, t in enumerate(self.tokens):
            if t == token and i not in state:
                return state | {i}
        return state


def build_constraint_fsm(
    event: EventTuple,
    min_matched: Optional[int] = None,
    state_beam_capacity: int = 5,
    expansion_width: int = 5,
    time_horizon: int = 25,
) -> ConstraintFSM:
    """States are the 2^n subsets of matched constraint tokens; a subset
    accepts once it holds at least `min_matched` tokens (default
    max(1, ceil(0.6 n)), i.e. three of five for full events)."""
    tokens = event.tokens()
    if not tokens:
        raise ValueError("event has no constraint tokens")
    if min_matched is None:
        min_matched = max(1, math.ceil(0.6 * len(tokens)))
    if not 1 <= min_matched <= len(tokens):
        raise ValueError("min_matched out of range")
    return ConstraintFSM(
        tokens=tokens,
        min_matched=min_matched,
        state_beam_capacity=state_beam_capacity,
        expansion_width=expansion_width,
        time_horizon=time_horizon,
    )


def fsm_decode(
    model: ConditionalSequenceModel,
    event: EventTuple,
    fsm: ConstraintFSM,
) -> Optional[GeneralizedSentence]:
    """Per-state beam search over the constraint FSM.  Emitting an
    unmatched constraint token moves a hypothesis to the successor state;
    a hypothesis may finish only in an accepting state.  Returns None
    (Failure) when the time horizon elapses with no accepting finished
    hypothesis."""
    end = model.vocab.end_id
    states: dict[frozenset[int], list[tuple[tuple[str, ...], float]]] = {
        frozenset(): [((), 0.0)]
    }
    finished: list[tuple[tuple[str, ...], float]] = []
    for _ in range(fsm.time_horizon):
        new_states: dict[frozenset[int], list[tuple[tuple[str, ...], float]]] = {}
        for state, hyps in states.items():
            for tokens, lp in hyps:
                logs = _candidate_logprobs(model, event, tokens)
                order = sorted(range(len(logs)), key=lambda t: (-logs[t], t))
                for tid in order[: fsm.expansion_width]:
                    if not math.isfinite(logs[tid]):
                        continue
                    new_lp = lp + float(logs[tid])
                    if tid == end:
                        if fsm.accepting(state):
                            finished.append((tokens, new_lp))
                        continue
                    tok = model.vocab.tokens[tid]
                    dest = fsm.successor(state, tok)
                    new_states.setdefault(dest, []).append(
                        (tokens + (tok,), new_lp)
                    )
        for state in new_states:
            new_states[state].sort(key=lambda h: (-h[1], _ids(model, h[0])))
            new_states[state] = new_states[state][: fsm.state_beam_capacity]
        states = new_states
        if not states:
            break
    if not finished:
        return None
    finished.sort(key=lambda h: (-h[1], _ids(model, h[0])))
    return list(finished[0][0])
