"""Lexicon services: hypernym walks for noun generalization, verb class
lookup, frame tables, and the first-name gender table.

The lexicon is an immutable snapshot loaded from one JSON document (see
``load_lexicon``); it is safe to share across threads after loading.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path


class UnknownLemma(KeyError):
    pass


class UnknownVerb(KeyError):
    pass


@dataclass(frozen=True)
class Lexicon:
    hypernyms: dict[str, str]
    hyponyms: dict[str, list[str]]
    lemma_index: dict[str, str]              # "lemma|pos" -> synset id
    verb_index: dict[str, list[str]]         # verb lemma -> class ids
    frame_table: dict[str, list[list[str]]]  # class id -> frames
    gender_table: dict[str, str]             # first name (lower) -> masc/fem/unknown
    _members: dict[str, list[str]] = field(default_factory=dict, repr=False)

    def class_members(self, class_id: str) -> list[str]:
        """Verb lemmas belonging to a class, sorted."""
        if not self._members:
            inverted: dict[str, list[str]] = {}
            for lemma, classes in self.verb_index.items():
                for cid in classes:
                    inverted.setdefault(cid, []).append(lemma)
            for lemmas in inverted.values():
                lemmas.sort()
            self._members.update(inverted)
        return self._members.get(class_id, [])

    def synset_exists(self, synset: str) -> bool:
        return (
            synset in self.hypernyms
            or synset in self.hyponyms
            or synset in self.lemma_index.values()
        )

    def is_descendant(self, synset: str, ancestor: str, max_depth: int = 16) -> bool:
        """True if `synset` equals `ancestor` or lies below it in the hypernym tree."""
        cur = synset
        for _ in range(max_depth):
            if cur == ancestor:
                return True
            nxt = self.hypernyms.get(cur)
            if nxt is None or nxt == cur:
                return False
            cur = nxt
        return False


def load_lexicon(path: str | Path) -> Lexicon:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    lex = Lexicon(
        hypernyms=raw["hypernyms"],
        hyponyms={k: list(v) for k, v in raw["hyponyms"].items()},
        lemma_index=raw["lemma_index"],
        verb_index={k: list(v) for k, v in raw["verb_classes"].items()},
        frame_table={k: [list(f) for f in v] for k, v in raw["frames"].items()},
        gender_table={k.lower(): v for k, v in raw.get("gender_table", {}).items()},
    )
    _check_acyclic(lex.hypernyms)
    return lex


def _check_acyclic(hypernyms: dict[str, str]) -> None:
    for start in hypernyms:
        seen = {start}
        cur = start
        while cur in hypernyms:
            cur = hypernyms[cur]
            if cur in seen:
                raise ValueError(f"hypernym cycle through {cur}")
            seen.add(cur)


def load_gender_csv(path: str | Path, threshold: float = 0.8) -> dict[str, str]:
    """Aggregate a name,gender,count census CSV into masc/fem/unknown.

    A name is masc or fem when at least `threshold` of its counted
    occurrences carry that gender; otherwise unknown.
    """
    totals: dict[str, dict[str, int]] = {}
    with open(path, encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lower() == "name":
                continue
            name, gender, count = row[0].lower(), row[1].lower(), int(row[2])
            totals.setdefault(name, {})
            totals[name][gender] = totals[name].get(gender, 0) + count
    table: dict[str, str] = {}
    for name, by_gender in totals.items():
        total = sum(by_gender.values())
        table[name] = "unknown"
        for gender in ("masc", "fem"):
            if by_gender.get(gender, 0) >= threshold * total:
                table[name] = gender
    return table


_POS_TO_WN = {"n": "n", "v": "v", "a": "a", "r": "r"}


def normalize_pos(pos: str) -> str:
    """Map a Penn-style POS tag to a coarse WordNet-style letter."""
    pos = pos.lower()
    if pos.startswith("nn"):
        return "n"
    if pos.startswith("vb"):
        return "v"
    if pos.startswith("jj"):
        return "a"
    if pos.startswith("rb"):
        return "r"
    return _POS_TO_WN.get(pos[:1], pos[:1])


def generalize_noun(lemma: str, pos: str, lexicon: Lexicon) -> str:
    """Return the synset two hypernym hops above the lemma's first sense,
    clamped to the highest ancestor when the tree is shallower."""
    key = f"{lemma.lower()}|{normalize_pos(pos)}"
    synset = lexicon.lemma_index.get(key)
    if synset is None:
        raise UnknownLemma(lemma)
    cur = synset
    for _ in range(2):
        parent = lexicon.hypernyms.get(cur)
        if parent is None:
            break
        cur = parent
    return cur


_STEM_SUFFIXES = ("ing", "ies", "ied", "es", "ed", "s")


def _stem_candidates(lemma: str) -> list[str]:
    cands = [lemma]
    for suf in _STEM_SUFFIXES:
        if lemma.endswith(suf) and len(lemma) > len(suf) + 1:
            stem = lemma[: -len(suf)]
            cands.append(stem)
            if suf in ("ies", "ied"):
                cands.append(stem + "y")
            if suf in ("ing", "ed", "es"):
                cands.append(stem + "e")
    return cands


def classify_verb(verb_lemma: str, lexicon: Lexicon) -> str:
    """First (lexicographically) VerbNet-style class containing the lemma,
    trying light suffix-stripped variants for inflected input."""
    for cand in _stem_candidates(verb_lemma.lower()):
        classes = lexicon.verb_index.get(cand)
        if classes:
            return sorted(classes)[0]
    raise UnknownVerb(verb_lemma)
