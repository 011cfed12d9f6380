"""Per-story dynamic memory binding entity tags and synsets to surface forms.

One StoryMemory instance belongs to exactly one story and is mutated both
during eventification (minting numbered entity tags) and during slot
filling (recording which surface form filled which tag or synset).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass
class Binding:
    key: str           # entity tag (<PERSON>0) or synset id (vessel.n.02)
    surface: str
    category: str      # NER category, or "SYNSET"
    positions: list[int] = field(default_factory=list)


class StoryMemory:
    """Ordered binding store; recency is the max mention position."""

    def __init__(self) -> None:
        self.bindings: list[Binding] = []
        self._by_key: dict[str, Binding] = {}
        self._by_surface: dict[tuple[str, str], Binding] = {}
        self._clock = 0

    def _tick(self) -> int:
        self._clock += 1
        return self._clock

    def category_count(self, category: str) -> int:
        return sum(1 for b in self.bindings if b.category == category)

    def lookup(self, key: str) -> Optional[Binding]:
        return self._by_key.get(key)

    def bind(self, key: str, surface: str, category: str) -> Binding:
        existing = self._by_key.get(key)
        if existing is not None:
            if existing.surface != surface:
                raise ValueError(
                    f"{key} already bound to {existing.surface!r}, not {surface!r}"
                )
            existing.positions.append(self._tick())
            return existing
        binding = Binding(key, surface, category, [self._tick()])
        self.bindings.append(binding)
        self._by_key[key] = binding
        self._by_surface[(category, surface)] = binding
        return binding

    def touch(self, key: str) -> None:
        b = self._by_key.get(key)
        if b is not None:
            b.positions.append(self._tick())

    def most_recent_entity(self) -> Optional[Binding]:
        entities = [b for b in self.bindings if b.category != "SYNSET"]
        if not entities:
            return None
        return max(entities, key=lambda b: b.positions[-1])

    def synset_bindings(self) -> list[Binding]:
        return [b for b in self.bindings if b.category == "SYNSET"]


def tag_entity(surface: str, category: str, memory: StoryMemory) -> str:
    """Return the story-local numbered tag for a named entity, minting
    `<CATEGORY>n` (n = distinct entities of that category seen so far,
    0-based) on first sight.  Idempotent per (category, surface)."""
    existing = memory._by_surface.get((category, surface))
    if existing is not None:
        memory.touch(existing.key)
        return existing.key
    tag = f"<{category}>{memory.category_count(category)}"
    memory.bind(tag, surface, category)
    return tag
