"""Event-conditioned sequence model contract plus the n-gram reference
implementation (absolute-discount backoff with a copy bias toward event
tokens that have not been emitted yet)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Protocol, Sequence

import numpy as np

from .types import EventTuple, GeneralizedSentence

BEGIN = "<s>"
END = "</s>"
UNK = "<unk>"

DEFAULT_DISCOUNT = 0.75
PROB_FLOOR = 1e-9


class EmptyCorpus(ValueError):
    pass


@dataclass(frozen=True)
class Vocabulary:
    tokens: tuple[str, ...]
    index: dict[str, int] = field(repr=False, default_factory=dict)

    @classmethod
    def build(cls, token_iter) -> "Vocabulary":
        seen = sorted({t for t in token_iter if t not in (BEGIN, END, UNK)})
        tokens = (BEGIN, END, UNK, *seen)
        return cls(tokens, {t: i for i, t in enumerate(tokens)})

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def begin_id(self) -> int:
        return 0

    @property
    def end_id(self) -> int:
        return 1

    @property
    def unk_id(self) -> int:
        return 2

    def id_of(self, token: str) -> int:
        return self.index.get(token, self.unk_id)

    def ids(self, tokens: Sequence[str]) -> list[int]:
        return [self.id_of(t) for t in tokens]


class ConditionalSequenceModel(Protocol):
    """Anything that scores next tokens given an event and a prefix."""

    vocab: Vocabulary

    def next_distribution(
        self, event: Optional[EventTuple], prefix: Sequence[str]
    ) -> np.ndarray: ...


@dataclass
class NGramModel:
    vocab: Vocabulary
    order: int
    copy_bias: float = 0.3
    direction: str = "forward"
    discount: float = DEFAULT_DISCOUNT
    # counts[k] maps a length-k context (tuple of ids) to {token_id: count}
    counts: list[dict[tuple[int, ...], dict[int, int]]] = field(default_factory=list)

    def _prefix_ids(self, prefix: Sequence[str]) -> list[int]:
        ids = self.vocab.ids(prefix)
        return [self.vocab.begin_id] * (self.order - 1) + ids

    def _backoff_vector(self, context: tuple[int, ...]) -> np.ndarray:
        """Absolute-discounted backoff distribution for one context."""
        v = len(self.vocab)
        # unigram level against a uniform base
        uni = self.counts[0][()]
        total = sum(uni.values())
        vec = np.full(v, self.discount * len(uni) / total / v)
        for tok, c in uni.items():
            vec[tok] += max(c - self.discount, 0.0) / total
        for k in range(1, self.order):
            ctx = context[-k:] if k <= len(context) else None
            table = self.counts[k].get(tuple(ctx)) if ctx is not None else None
            if not table:
                continue
            ctx_total = sum(table.values())
            backoff_mass = self.discount * len(table) / ctx_total
            higher = backoff_mass * vec
            for tok, c in table.items():
                higher[tok] += max(c - self.discount, 0.0) / ctx_total
            vec = higher
        vec = np.maximum(vec, PROB_FLOOR)
        return vec / vec.sum()

    def next_distribution(
        self, event: Optional[EventTuple], prefix: Sequence[str]
    ) -> np.ndarray:
        """Full distribution over the vocabulary for the next token.

        When the copy bias is active, a `copy_bias` fraction of the
        probability mass sitting outside the event's not-yet-emitted
        tokens is moved uniformly onto them, so an unconsumed event token
        never loses probability relative to the unbiased model.
        """
        ids = self._prefix_ids(prefix)
        vec = self._backoff_vector(tuple(ids))
        if event is not None and self.copy_bias > 0.0:
            emitted = set(prefix)
            targets = sorted(
                {
                    self.vocab.index[t]
                    for t in event.tokens()
                    if t not in emitted and t in self.vocab.index
                }
            )
            if targets:
                mask = np.zeros(len(vec), dtype=bool)
                mask[targets] = True
                moved = self.copy_bias * vec[~mask].sum()
                vec = vec.copy()
                vec[~mask] *= 1.0 - self.copy_bias
                vec[mask] += moved / len(targets)
        return vec

    def sentence_nll(
        self, event: Optional[EventTuple], sentence: Sequence[str]
    ) -> float:
        """Mean per-token negative log2 likelihood, end token included."""
        tokens = list(sentence) + [END]
        total = 0.0
        for i, tok in enumerate(tokens):
            vec = self.next_distribution(event, tokens[:i])
            total += -np.log2(vec[self.vocab.id_of(tok)])
        return total / len(tokens)

    # -- serialization --------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format": "eventsent-ngram/1",
            "vocab": list(self.vocab.tokens),
            "order": self.order,
            "copy_bias": self.copy_bias,
            "direction": self.direction,
            "discount": self.discount,
            "counts": [
                {",".join(map(str, ctx)): dict(sorted(table.items())) for ctx, table in level.items()}
                for level in self.counts
            ],
        }

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True)

    @classmethod
    def from_dict(cls, raw: dict) -> "NGramModel":
        if raw.get("format") != "eventsent-ngram/1":
            raise ValueError(f"unsupported model format: {raw.get('format')!r}")
        tokens = tuple(raw["vocab"])
        vocab = Vocabulary(tokens, {t: i for i, t in enumerate(tokens)})
        counts = [
            {
                tuple(int(x) for x in ctx.split(",") if x != ""): {
                    int(t): c for t, c in table.items()
                }
                for ctx, table in level.items()
            }
            for level in raw["counts"]
        ]
        return cls(
            vocab=vocab,
            order=raw["order"],
            copy_bias=raw["copy_bias"],
            direction=raw["direction"],
            discount=raw["discount"],
            counts=counts,
        )

    @classmethod
    def load(cls, path: str | Path) -> "NGramModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def train(
    pairs: Sequence[tuple[EventTuple, GeneralizedSentence]],
    order: int = 3,
    copy_bias: float = 0.3,
    direction: str = "forward",
    discount: float = DEFAULT_DISCOUNT,
) -> NGramModel:
    """Count-based training over (event, generalized sentence) pairs.
    Backward models are trained on reversed sentences; scoring them on a
    reversed sequence is by construction the forward score of the
    original."""
    if not pairs:
        raise EmptyCorpus("no training pairs")
    if order < 2:
        raise ValueError("order must be >= 2")
    if direction not in ("forward", "backward"):
        raise ValueError(f"bad direction {direction!r}")

    def all_tokens():
        for event, sentence in pairs:
            yield from event.tokens()
            yield from sentence

    vocab = Vocabulary.build(all_tokens())
    counts: list[dict[tuple[int, ...], dict[int, int]]] = [
        {} for _ in range(order)
    ]
    counts[0][()] = {}
    for _, sentence in pairs:
        body = list(sentence)
        if direction == "backward":
            body = body[::-1]
        ids = [vocab.begin_id] * (order - 1) + vocab.ids(body) + [vocab.end_id]
        for i in range(order - 1, len(ids)):
            tok = ids[i]
            for k in range(order):
                ctx = tuple(ids[i - k : i])
                table = counts[k].setdefault(ctx, {})
                table[tok] = table.get(tok, 0) + 1
    return NGramModel(
        vocab=vocab,
        order=order,
        copy_bias=copy_bias,
        direction=direction,
        discount=discount,
        counts=counts,
    )
