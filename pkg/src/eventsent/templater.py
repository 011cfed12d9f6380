"""Template-based realizer: frame prediction from the event's filled-slot
signature, grammar-constrained blank filling with forward/backward
sequence models, and loss-based confidence."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .lexicon import Lexicon
from .ngram import NGramModel
from .types import EventTuple, GeneralizedSentence, TokenKind, token_kind

DETERMINERS = {"the", "a", "an", "this", "that", "these", "those"}
PREPOSITIONS = {
    "to", "of", "in", "on", "at", "by", "for", "with", "from", "into",
    "through", "over", "under", "off", "about",
}

# Filled-slot signature -> frame.  Shipped as data (see fixtures/frame_map.json)
# so the rules can be overridden without code changes.
DEFAULT_FRAME_MAP: dict[str, list[str]] = {
    "s,v": ["NP", "V"],
    "v": ["NP", "V"],
    "v,o": ["NP", "V", "NP"],
    "s,v,o": ["NP", "V", "NP"],
    "s,v,p,m": ["NP", "V", "PP"],
    "v,p,m": ["NP", "V", "PP"],
    "s,v,o,p,m": ["NP", "V", "NP", "PP"],
    "v,o,p,m": ["NP", "V", "NP", "PP"],
    "s,v,o,m": ["NP", "V", "NP"],
    "s,v,m": ["NP", "V"],
}
FALLBACK_FRAME = ["NP", "V"]


@dataclass(frozen=True)
class FrameSpec:
    symbols: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.symbols.count("V") != 1:
            raise ValueError("frame needs exactly one V")
        if any(sym not in ("NP", "V", "PP") for sym in self.symbols):
            raise ValueError(f"bad frame symbols: {self.symbols}")


@dataclass
class TemplateConfig:
    top_k: int = 3
    max_phrase_length: int = 3
    rng_seed: int = 0
    # candidate words must beat the uniform baseline by this factor to be
    # inserted at all; an untrained model therefore fills no blanks
    insertion_threshold: float = 1.5

    def __post_init__(self) -> None:
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")


def word_pos(token: str, lexicon: Optional[Lexicon] = None) -> str:
    """Coarse POS over the generalized vocabulary: det / noun / verb /
    prep / other.  Synsets, entity tags, and pronouns count as nouns."""
    low = token.lower()
    if low in DETERMINERS:
        return "det"
    if low in PREPOSITIONS:
        return "prep"
    kind = token_kind(token)
    if kind in (TokenKind.SYNSET, TokenKind.ENTITY_TAG, TokenKind.PRONOUN):
        return "noun"
    if kind is TokenKind.VERB_CLASS:
        return "verb"
    if lexicon is not None and low in lexicon.verb_index:
        return "verb"
    return "other"


def predict_frame(
    event: EventTuple,
    frame_map: Optional[dict[str, list[str]]] = None,
    lexicon: Optional[Lexicon] = None,
) -> FrameSpec:
    """Map the event's filled-slot signature to a frame, preferring a
    frame the verb's class actually licenses when the lexicon knows one."""
    frame_map = frame_map or DEFAULT_FRAME_MAP
    signature = ",".join(name for name, tok in event.slots() if tok is not None)
    symbols = frame_map.get(signature, FALLBACK_FRAME)
    if lexicon is not None:
        licensed = lexicon.frame_table.get(event.v, [])
        if licensed and symbols not in licensed:
            same_arity = [f for f in licensed if len(f) == len(symbols)]
            if same_arity:
                symbols = same_arity[0]
    return FrameSpec(tuple(symbols))


def _forbidden_bigram(prev_pos: str, new_pos: str) -> bool:
    return (prev_pos == "det" and new_pos == "det") or (
        prev_pos == "noun" and new_pos == "noun"
    )


def _stop_token(pos: str, phrase_symbol: str) -> bool:
    """A generated token that signals the next phrase: a verb while
    filling an NP/PP, a nominal while a verb is still expected."""
    if phrase_symbol in ("NP", "PP"):
        return pos == "verb"
    return pos in ("det", "noun")


@dataclass
class _Phrase:
    symbol: str
    tokens: list[str] = field(default_factory=list)


_PUNCT = {".", ",", "!", "?", ";", ":"}


def _fill_after(
    phrase: _Phrase,
    context: list[str],
    model: NGramModel,
    _event: None,
    cfg: TemplateConfig,
    rng: np.random.Generator,
    lexicon: Optional[Lexicon],
) -> None:
    """Append up to max_phrase_length sampled words after the phrase's
    current content, honoring adjacency rules and stop tokens."""
    baseline = cfg.insertion_threshold / len(model.vocab)
    reserved = {model.vocab.begin_id, model.vocab.end_id, model.vocab.unk_id}
    for _ in range(cfg.max_phrase_length):
        vec = model.next_distribution(None, context + phrase.tokens)
        order = sorted(range(len(vec)), key=lambda t: (-vec[t], t))
        top = [
            t
            for t in order[: cfg.top_k]
            if vec[t] > baseline
            and t not in reserved
            and model.vocab.tokens[t] not in _PUNCT
        ]
        if not top:
            return
        probs = np.array([vec[t] for t in top])
        tid = int(top[rng.choice(len(top), p=probs / probs.sum())])
        word = model.vocab.tokens[tid]
        pos = word_pos(word, lexicon)
        prev = phrase.tokens[-1] if phrase.tokens else (context[-1] if context else "")
        if prev and _forbidden_bigram(word_pos(prev, lexicon), pos):
            return
        if _stop_token(pos, phrase.symbol):
            return
        phrase.tokens.append(word)


def _fill_before(
    phrase: _Phrase,
    following: list[str],
    model: NGramModel,
    cfg: TemplateConfig,
    rng: np.random.Generator,
    lexicon: Optional[Lexicon],
) -> None:
    """Prepend words using the backward model (which was trained on
    reversed sentences, so its `next` token is the preceding word)."""
    mirror = _Phrase(phrase.symbol, list(reversed(phrase.tokens)))
    _fill_after(mirror, list(reversed(following)), model, None, cfg, rng, lexicon)
    phrase.tokens = list(reversed(mirror.tokens))


def realize_template(
    event: EventTuple,
    frame: FrameSpec,
    forward_lm: NGramModel,
    backward_lm: NGramModel,
    cfg: TemplateConfig,
    lexicon: Optional[Lexicon] = None,
) -> tuple[GeneralizedSentence, float]:
    """Anchor every event token at its frame position (pattern
    ``[_ s] { v [_ o] [p _ m] }``) and fill the blanks around the anchors
    by top-k sampling from the directional models.  Every non-Empty event
    token is guaranteed to appear in the output."""
    rng = np.random.default_rng(cfg.rng_seed)
    np_anchors = [tok for tok in (event.s, event.o) if tok is not None]
    phrases: list[_Phrase] = []
    pp_placed = False
    for symbol in frame.symbols:
        if symbol == "V":
            phrases.append(_Phrase("V", [event.v]))
        elif symbol == "NP":
            anchor = np_anchors.pop(0) if np_anchors else None
            toks: list[str] = []
            if anchor is not None:
                # determiners are defaulted for entity tags in noun
                # phrases only; pronouns and prepositional objects go bare
                if token_kind(anchor) is TokenKind.ENTITY_TAG:
                    toks.append("the")
                toks.append(anchor)
            phrases.append(_Phrase("NP", toks))
        elif symbol == "PP":
            toks = []
            if event.p is not None:
                toks.append(event.p)
            if event.m is not None:
                toks.append(event.m)
            phrases.append(_Phrase("PP", toks))
            pp_placed = True
    # anchors the predicted frame had no position for still must surface
    for anchor in np_anchors:
        phrases.append(_Phrase("NP", [anchor]))
    if not pp_placed and (event.p is not None or event.m is not None):
        toks = [t for t in (event.p, event.m) if t is not None]
        phrases.append(_Phrase("PP", toks))

    # blanks: before the subject, after the object, after the PP object
    if phrases and phrases[0].symbol == "NP" and phrases[0].tokens:
        rest = [t for ph in phrases[1:] for t in ph.tokens]
        _fill_before(phrases[0], rest, backward_lm, cfg, rng, lexicon)
    context: list[str] = list(phrases[0].tokens) if phrases else []
    for phrase in phrases[1:]:
        if phrase.symbol in ("NP", "PP") and phrase.tokens:
            _fill_after(phrase, context, forward_lm, event, cfg, rng, lexicon)
        context.extend(phrase.tokens)

    tokens = [tok for phrase in phrases for tok in phrase.tokens]
    tokens.append(".")
    confidence = template_confidence(
        _token_losses(forward_lm, tokens[:-1]), len(tokens) - 1, len(forward_lm.vocab)
    )
    return tokens, confidence


def _token_losses(model: NGramModel, tokens: Sequence[str]) -> list[float]:
    losses = []
    for i, tok in enumerate(tokens):
        vec = model.next_distribution(None, list(tokens[:i]))
        losses.append(float(-np.log2(vec[model.vocab.id_of(tok)])))
    return losses


def template_confidence(
    losses: Sequence[float], length: int, vocab_size: int
) -> float:
    """1 minus the length-normalized summed loss, mapped into [0, 1] by
    the uniform-model loss cap log2(vocab size)."""
    if length < 1:
        raise ValueError("length must be >= 1")
    cap = math.log2(vocab_size)
    normalized = sum(losses) / length / cap
    return 1.0 - min(1.0, normalized)
