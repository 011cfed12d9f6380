"""Core domain types: event tuples and the generalized token vocabulary."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

# A generalized sentence is just a token sequence over the generalized
# vocabulary (synsets, entity tags, <PRP>, verb classes, function words).
GeneralizedSentence = list[str]

SLOT_NAMES = ("s", "v", "o", "p", "m")

PRONOUN_TOKEN = "<PRP>"

_ENTITY_TAG_RE = re.compile(r"^<[A-Z_]+>\d+$")
_SYNSET_RE = re.compile(r"^[a-z0-9_'\-]+\.[nvasr]\.\d{2}$")
_VERB_CLASS_RE = re.compile(r"^[a-z_]+-\d+(?:[.\-]\d+)*$")


class TokenKind(enum.Enum):
    SYNSET = "synset"
    ENTITY_TAG = "entity_tag"
    PRONOUN = "pronoun"
    VERB_CLASS = "verb_class"
    LITERAL = "literal"


def token_kind(token: str) -> TokenKind:
    """Classify a generalized-vocabulary token by its surface shape."""
    if token == PRONOUN_TOKEN:
        return TokenKind.PRONOUN
    if _ENTITY_TAG_RE.match(token):
        return TokenKind.ENTITY_TAG
    if _SYNSET_RE.match(token):
        return TokenKind.SYNSET
    if _VERB_CLASS_RE.match(token):
        return TokenKind.VERB_CLASS
    return TokenKind.LITERAL


def entity_tag_category(tag: str) -> str:
    """`<PERSON>3` -> `PERSON`. Raises ValueError on non-tag tokens."""
    m = re.match(r"^<([A-Z_]+)>(\d+)$", tag)
    if m is None:
        raise ValueError(f"not an entity tag: {tag!r}")
    return m.group(1)


@dataclass(frozen=True)
class GeneralToken:
    kind: TokenKind
    surface: str

    @classmethod
    def classify(cls, surface: str) -> "GeneralToken":
        return cls(token_kind(surface), surface)


@dataclass(frozen=True)
class EventTuple:
    """The 5-slot sentence abstraction: subject, verb class, object,
    preposition, modifier.  Empty slots are None; the verb is mandatory.
    Canonical order is (s, v, o, p, m)."""

    s: Optional[str]
    v: str
    o: Optional[str]
    p: Optional[str]
    m: Optional[str]

    def __post_init__(self) -> None:
        if not self.v:
            raise ValueError("event verb slot may not be empty")

    def slots(self) -> Iterator[tuple[str, Optional[str]]]:
        for name in SLOT_NAMES:
            yield name, getattr(self, name)

    def tokens(self) -> list[str]:
        """Non-empty slot tokens in canonical order, duplicates removed."""
        out: list[str] = []
        for _, tok in self.slots():
            if tok is not None and tok not in out:
                out.append(tok)
        return out

    def to_list(self) -> list[Optional[str]]:
        return [self.s, self.v, self.o, self.p, self.m]

    @classmethod
    def from_list(cls, items: Sequence[Optional[str]]) -> "EventTuple":
        if len(items) != 5:
            raise ValueError(f"event needs exactly 5 slots, got {len(items)}")
        s, v, o, p, m = items
        if v is None:
            raise ValueError("event verb slot may not be empty")
        return cls(s, v, o, p, m)


_NO_SPACE_BEFORE = {".", ",", "!", "?", ";", ":", "'s", "n't", "'re", "'ll"}


def detokenize(tokens: Sequence[str]) -> str:
    """Join tokens with spaces, attaching punctuation to the previous token."""
    parts: list[str] = []
    for tok in tokens:
        if parts and tok in _NO_SPACE_BEFORE:
            parts[-1] += tok
        else:
            parts.append(tok)
    return " ".join(parts)
