"""Corpus eventification: sentence splitting, event extraction,
generalization, and train/validation/test partitioning."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Optional

from .lexicon import (
    Lexicon,
    UnknownLemma,
    UnknownVerb,
    classify_verb,
    generalize_noun,
)
from .memory import StoryMemory, tag_entity
from .types import EventTuple, GeneralizedSentence, PRONOUN_TOKEN

log = logging.getLogger(__name__)


class NoVerb(ValueError):
    pass


@dataclass
class ParsedSentence:
    tokens: list[tuple[str, str, str]]            # (surface, lemma, pos)
    dep_edges: list[tuple[int, int, str]]         # (head, child, rel); head -1 = root
    ner_spans: list[tuple[int, int, str]]         # [start, end) with category
    constituency: list[tuple[int, int, str]] = field(default_factory=list)

    def __post_init__(self) -> None:
        n = len(self.tokens)
        for h, c, _ in self.dep_edges:
            if not (-1 <= h < n and 0 <= c < n):
                raise ValueError("dependency edge index out of range")
        for start, end, _ in self.ner_spans + self.constituency:
            if not (0 <= start < end <= n):
                raise ValueError("span out of token range")


@dataclass
class Story:
    id: str
    sentences: list[ParsedSentence]
    title: str = ""
    source: str = ""


@dataclass
class CorpusSplit:
    train: list[Story]
    validation: list[Story]
    test: list[Story]


def story_from_dict(raw: dict) -> Story:
    sentences = [
        ParsedSentence(
            tokens=[tuple(t) for t in sent["tokens"]],
            dep_edges=[tuple(e) for e in sent["dep_edges"]],
            ner_spans=[tuple(s) for s in sent["ner_spans"]],
            constituency=[tuple(s) for s in sent.get("constituency", [])],
        )
        for sent in raw["sentences"]
    ]
    if not sentences:
        raise ValueError(f"story {raw.get('id')!r} has no sentences")
    return Story(
        id=raw["id"],
        sentences=sentences,
        title=raw.get("title", ""),
        source=raw.get("source", ""),
    )


# --- sentence splitting -----------------------------------------------------

_COMPLEMENTIZERS = {"that", "because", "when", "while", "if", "although", "after", "before"}
_PUNCT = {".", ",", "!", "?", ";", ":"}


def _is_verb(pos: str) -> bool:
    return pos.startswith("VB") or pos == "MD"


def _subsentence(s: ParsedSentence, idxs: list[int], capitalize: bool = True) -> ParsedSentence:
    idx_set = set(idxs)
    remap = {old: new for new, old in enumerate(idxs)}
    tokens = [s.tokens[i] for i in idxs]
    edges: list[tuple[int, int, str]] = []
    for h, c, rel in s.dep_edges:
        if c not in idx_set:
            continue
        if h in idx_set:
            edges.append((remap[h], remap[c], rel))
        elif h == -1:
            edges.append((-1, remap[c], rel))
        else:
            # head fell outside the clause: the dependent becomes a root
            # candidate if it is the clause's verb
            if _is_verb(s.tokens[c][2]):
                edges.append((-1, remap[c], "root"))
    if not any(h == -1 for h, _, _ in edges):
        for new, old in enumerate(idxs):
            if _is_verb(s.tokens[old][2]):
                edges.append((-1, new, "root"))
                break
    ner = [
        (remap[a], remap[b - 1] + 1, cat)
        for a, b, cat in s.ner_spans
        if all(i in idx_set for i in range(a, b))
    ]
    cons = [
        (remap[a], remap[b - 1] + 1, lab)
        for a, b, lab in s.constituency
        if all(i in idx_set for i in range(a, b))
        and not (remap[a] == 0 and remap[b - 1] + 1 == len(tokens))
    ]
    if tokens and tokens[-1][0] not in _PUNCT:
        tokens.append((".", ".", "."))
    if capitalize and tokens:
        surface, lemma, pos = tokens[0]
        tokens[0] = (surface[:1].upper() + surface[1:], lemma, pos)
    return ParsedSentence(tokens, edges, ner, cons)


def _conjunction_point(s: ParsedSentence, idxs: list[int]) -> Optional[int]:
    """Position (within idxs) of a clausal coordinating conjunction: a CC
    token with at least one verb on each side."""
    for k, i in enumerate(idxs):
        if s.tokens[i][2] != "CC":
            continue
        left_verbs = any(_is_verb(s.tokens[j][2]) for j in idxs[:k])
        right_verbs = any(_is_verb(s.tokens[j][2]) for j in idxs[k + 1 :])
        if left_verbs and right_verbs:
            return k
    return None


def split_sentence(s: ParsedSentence) -> list[ParsedSentence]:
    """Split on SBAR clauses and clausal conjunctions, outermost first.
    Pieces keep original left-to-right order; a sentence with no split
    point maps to itself."""
    if not s.constituency:
        return [s]

    sbar_spans = [(a, b) for a, b, lab in s.constituency if lab == "SBAR"]
    # keep only outermost SBARs; nested ones are handled by recursion
    outer = [
        (a, b)
        for a, b in sbar_spans
        if not any((c < a and b <= d) or (c <= a and b < d) for c, d in sbar_spans)
    ]
    pieces: list[list[int]] = []
    if outer:
        covered = set()
        for a, b in sorted(outer):
            idxs = list(range(a, b))
            # drop the leading complementizer and punctuation
            while idxs and (
                s.tokens[idxs[0]][0].lower() in _COMPLEMENTIZERS
                or s.tokens[idxs[0]][0] in _PUNCT
            ):
                idxs = idxs[1:]
            if idxs:
                pieces.append(idxs)
            covered.update(range(a, b))
        remainder = [i for i in range(len(s.tokens)) if i not in covered]
        while remainder and s.tokens[remainder[-1]][0] == ",":
            remainder.pop()
        if any(_is_verb(s.tokens[i][2]) for i in remainder):
            pieces.append(remainder)
        pieces.sort(key=lambda idxs: idxs[0])
    else:
        pieces = [list(range(len(s.tokens)))]

    # conjunction splits within each piece
    final: list[list[int]] = []
    for idxs in pieces:
        k = _conjunction_point(s, idxs)
        while k is not None:
            left = idxs[:k]
            while left and s.tokens[left[-1]][0] == ",":
                left.pop()
            final.append(left)
            idxs = idxs[k + 1 :]
            k = _conjunction_point(s, idxs)
        final.append(idxs)

    if len(final) == 1 and len(final[0]) == len(s.tokens):
        return [s]
    out = [_subsentence(s, idxs) for idxs in final if idxs]
    # recurse for nested SBARs surviving inside a piece
    result: list[ParsedSentence] = []
    for piece in out:
        if any(lab == "SBAR" for _, _, lab in piece.constituency):
            result.extend(split_sentence(piece))
        else:
            result.append(piece)
    return result


# --- event extraction -------------------------------------------------------


def _ner_span_at(s: ParsedSentence, i: int) -> Optional[tuple[int, int, str]]:
    for a, b, cat in s.ner_spans:
        if a <= i < b:
            return (a, b, cat)
    return None


def _generalize_index(
    s: ParsedSentence, i: int, memory: StoryMemory, lexicon: Lexicon
) -> str:
    span = _ner_span_at(s, i)
    if span is not None:
        a, b, cat = span
        surface = " ".join(s.tokens[j][0] for j in range(a, b))
        return tag_entity(surface, cat, memory)
    surface, lemma, pos = s.tokens[i]
    if pos in ("PRP", "PRP$"):
        return PRONOUN_TOKEN
    if pos.startswith("NN"):
        try:
            return generalize_noun(lemma, pos, lexicon)
        except UnknownLemma:
            return lemma.lower()
    if pos.startswith("VB"):
        return lemma.lower()
    return surface.lower() if pos != "." and surface not in _PUNCT else surface


def _root_verb(s: ParsedSentence) -> int:
    for h, c, rel in s.dep_edges:
        if h == -1 and _is_verb(s.tokens[c][2]):
            return c
    for i, (_, _, pos) in enumerate(s.tokens):
        if _is_verb(pos):
            return i
    raise NoVerb("sentence has no verb")


def eventify_sentence(
    s: ParsedSentence, memory: StoryMemory, lexicon: Lexicon
) -> EventTuple:
    """Extract the main verb's ⟨s,v,o,p,m⟩ event from one (split) sentence."""
    root = _root_verb(s)
    children: dict[str, int] = {}
    for h, c, rel in s.dep_edges:
        if h == root and rel not in children:
            children[rel] = c

    verb_lemma = s.tokens[root][1].lower()
    try:
        v = classify_verb(verb_lemma, lexicon)
    except UnknownVerb:
        v = verb_lemma

    def slot(idx: Optional[int]) -> Optional[str]:
        if idx is None:
            return None
        return _generalize_index(s, idx, memory, lexicon)

    subj = children.get("nsubj", children.get("nsubjpass"))
    obj = children.get("dobj", children.get("obj"))
    prep_idx = children.get("prep", children.get("case"))

    p = s.tokens[prep_idx][0].lower() if prep_idx is not None else None
    m_idx: Optional[int] = None
    if prep_idx is not None:
        for h, c, rel in s.dep_edges:
            if h == prep_idx and rel == "pobj":
                m_idx = c
                break
    if m_idx is None:
        m_idx = children.get("iobj")
    if m_idx is None:
        for rel in ("advmod", "amod", "npadvmod"):
            if rel in children:
                m_idx = children[rel]
                break

    return EventTuple(slot(subj), v, slot(obj), p, slot(m_idx))


def generalize_sentence(
    s: ParsedSentence, memory: StoryMemory, lexicon: Lexicon
) -> GeneralizedSentence:
    """Token-level generalization of the whole sentence (the realization
    target): NER spans collapse to entity tags, nouns to synsets, pronouns
    to <PRP>, verbs to their lemma."""
    out: list[str] = []
    i = 0
    while i < len(s.tokens):
        span = _ner_span_at(s, i)
        out.append(_generalize_index(s, i, memory, lexicon))
        i = span[1] if span is not None else i + 1
    return out


# --- corpus-level driver ----------------------------------------------------


def split_corpus(stories: list[Story], seed: int = 0, ratio=(8, 1, 1)) -> CorpusSplit:
    """Assign whole stories to train/validation/test in `ratio`, shuffled
    deterministically by `seed`.  Sizes are exact within one story."""
    n = len(stories)
    total = sum(ratio)
    n_val = round(n * ratio[1] / total)
    n_test = round(n * ratio[2] / total)
    order = list(range(n))
    random.Random(seed).shuffle(order)
    shuffled = [stories[i] for i in order]
    n_train = n - n_val - n_test
    return CorpusSplit(
        train=shuffled[:n_train],
        validation=shuffled[n_train : n_train + n_val],
        test=shuffled[n_train + n_val :],
    )


def eventify_story(
    story: Story, lexicon: Lexicon
) -> list[tuple[EventTuple, GeneralizedSentence]]:
    memory = StoryMemory()
    pairs: list[tuple[EventTuple, GeneralizedSentence]] = []
    for sent in story.sentences:
        for piece in split_sentence(sent):
            try:
                sentence = generalize_sentence(piece, memory, lexicon)
                event = eventify_sentence(piece, memory, lexicon)
            except NoVerb:
                log.warning("story %s: skipped verbless clause", story.id)
                continue
            pairs.append((event, sentence))
    return pairs


def eventify_corpus(
    stories: list[Story], lexicon: Lexicon, seed: int = 0, ratio=(8, 1, 1)
) -> tuple[dict[str, list[tuple[EventTuple, GeneralizedSentence]]], CorpusSplit]:
    """Eventify every story and partition the corpus by story.  Fully
    deterministic given `seed`."""
    per_story = {story.id: eventify_story(story, lexicon) for story in stories}
    return per_story, split_corpus(stories, seed=seed, ratio=ratio)
