"""Slot filler: replaces generalized tokens (entity tags, synsets,
pronouns, verb classes) with concrete surface forms using the per-story
memory, an entity name pool, and the lexicon."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .lexicon import Lexicon
from .memory import StoryMemory
from .types import (
    GeneralizedSentence,
    TokenKind,
    detokenize,
    entity_tag_category,
    token_kind,
)

log = logging.getLogger(__name__)


@dataclass
class EntityPool:
    candidates: dict[str, list[str]]  # NER category -> names
    used: dict[str, set[str]] = field(default_factory=dict)

    @classmethod
    def load(cls, path: str | Path) -> "EntityPool":
        with open(path, encoding="utf-8") as fh:
            return cls({k: list(v) for k, v in json.load(fh).items()})

    def draw(self, category: str, rng: np.random.Generator) -> Optional[str]:
        used = self.used.setdefault(category, set())
        avail = [n for n in self.candidates.get(category, []) if n not in used]
        if not avail:
            return None
        name = avail[int(rng.integers(len(avail)))]
        used.add(name)
        return name


def choose_hyponym(synset: str, lexicon: Lexicon, rng: np.random.Generator) -> str:
    """Uniform choice over descendants one or two hyponym levels down;
    a leaf synset returns itself."""
    depth1 = lexicon.hyponyms.get(synset, [])
    depth2 = [g for h in depth1 for g in lexicon.hyponyms.get(h, [])]
    options = sorted(set(depth1) | set(depth2))
    if not options:
        return synset
    return options[int(rng.integers(len(options)))]


_MASC = {"nominative": "he", "objective": "him"}
_FEM = {"nominative": "she", "objective": "her"}
_THEY = {"nominative": "they", "objective": "them"}
_IT = {"nominative": "it", "objective": "it"}


def resolve_pronoun(
    memory: StoryMemory,
    gender_table: dict[str, str],
    case: str = "nominative",
) -> str:
    """Pronoun for the most recently mentioned entity.  Organizations are
    always they; persons use the gender table (unknown names get they);
    anything else is it, as is an empty memory."""
    recent = memory.most_recent_entity()
    if recent is None:
        return _IT[case]
    if recent.category == "ORG":
        return _THEY[case]
    if recent.category == "PERSON":
        first = recent.surface.split()[0].lower()
        gender = gender_table.get(first, "unknown")
        if gender == "masc":
            return _MASC[case]
        if gender == "fem":
            return _FEM[case]
        return _THEY[case]
    return _IT[case]


def _conjugate_third_person(verb: str) -> str:
    if verb.endswith(("s", "x", "z", "ch", "sh", "o")):
        return verb + "es"
    if verb.endswith("y") and len(verb) > 1 and verb[-2] not in "aeiou":
        return verb[:-1] + "ies"
    return verb + "s"


def _synset_surface(synset: str) -> str:
    return synset.split(".")[0].replace("_", " ")


_OBJECTIVE_TRIGGER_POS = {"verb", "prep"}


def fill_sentence(
    sentence: GeneralizedSentence,
    memory: StoryMemory,
    pool: EntityPool,
    lexicon: Lexicon,
    rng: np.random.Generator,
) -> str:
    """Fill one generalized sentence.  Entity tags reuse their story
    binding or draw a fresh pooled name; synsets reuse the surface of a
    stored synset they descend from, else a hyponym one or two levels
    down; verb classes take their first member in simple present."""
    from .templater import word_pos  # local import avoids a cycle

    out: list[str] = []
    prev_pos = ""
    for token in sentence:
        kind = token_kind(token)
        if kind is TokenKind.ENTITY_TAG:
            binding = memory.lookup(token)
            if binding is not None:
                memory.touch(token)
                out.append(binding.surface)
            else:
                category = entity_tag_category(token)
                name = pool.draw(category, rng)
                if name is None:
                    log.warning("entity pool exhausted for %s; keeping %s", category, token)
                    out.append(token)
                else:
                    memory.bind(token, name, category)
                    out.append(name)
        elif kind is TokenKind.SYNSET:
            surface: Optional[str] = None
            # most recent stored synset our token descends from wins
            for binding in sorted(
                memory.synset_bindings(), key=lambda b: -b.positions[-1]
            ):
                if lexicon.is_descendant(token, binding.key) or lexicon.is_descendant(
                    binding.key, token
                ):
                    surface = binding.surface
                    memory.touch(binding.key)
                    break
            if surface is None:
                surface = _synset_surface(choose_hyponym(token, lexicon, rng))
                memory.bind(token, surface, "SYNSET")
            out.append(surface)
        elif kind is TokenKind.PRONOUN:
            case = "objective" if prev_pos in _OBJECTIVE_TRIGGER_POS else "nominative"
            out.append(resolve_pronoun(memory, lexicon.gender_table, case))
        elif kind is TokenKind.VERB_CLASS:
            members = lexicon.class_members(token)
            verb = members[0] if members else token.split("-")[0]
            out.append(_conjugate_third_person(verb))
        else:
            out.append(token)
        prev_pos = word_pos(token, lexicon)

    if out:
        out[0] = out[0][:1].upper() + out[0][1:]
    return detokenize(out)
