"""Retrieve-and-edit realizer: co-occurrence token embeddings, exact
nearest-neighbor retrieval under a normalized cosine distance, and a
slot-aligned substitution editor."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Protocol, Sequence

import numpy as np

from .ngram import EmptyCorpus
from .types import EventTuple, GeneralizedSentence

_SNAP = 1e-9  # distances below this are exact-match noise and snap to 0


class EditorModel(Protocol):
    def edit(
        self,
        input_event: EventTuple,
        retrieved_event: EventTuple,
        retrieved_sentence: GeneralizedSentence,
    ) -> GeneralizedSentence: ...


class SlotSubstitutionEditor:
    """Deterministic default editor: aligns retrieved-event slots to
    input-event slots and substitutes surface forms in the retrieved
    sentence.  Slots absent from the sentence are left as-is."""

    def edit(
        self,
        input_event: EventTuple,
        retrieved_event: EventTuple,
        retrieved_sentence: GeneralizedSentence,
    ) -> GeneralizedSentence:
        mapping: dict[str, str] = {}
        for (_, src), (_, dst) in zip(retrieved_event.slots(), input_event.slots()):
            if src is not None and dst is not None and src != dst:
                mapping[src] = dst
        return [mapping.get(tok, tok) for tok in retrieved_sentence]


@dataclass
class RetrievalIndex:
    embeddings: np.ndarray                 # (n_pairs, dim), L2-normalized
    pairs: list[tuple[EventTuple, GeneralizedSentence]]
    token_vectors: dict[str, np.ndarray]
    dim: int

    def __len__(self) -> int:
        return len(self.pairs)

    def embed_event(self, event: EventTuple) -> np.ndarray:
        vecs = [self.token_vectors[t] for t in event.tokens() if t in self.token_vectors]
        if not vecs:
            return np.zeros(self.dim)
        v = np.mean(vecs, axis=0)
        norm = np.linalg.norm(v)
        return v / norm if norm > 0 else v

    def save(self, path: str | Path) -> None:
        doc = {
            "format": "eventsent-index/1",
            "dim": self.dim,
            "embeddings": self.embeddings.tolist(),
            "pairs": [
                {"event": e.to_list(), "sentence": s} for e, s in self.pairs
            ],
            "token_vectors": {t: v.tolist() for t, v in self.token_vectors.items()},
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True)

    @classmethod
    def load(cls, path: str | Path) -> "RetrievalIndex":
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        if doc.get("format") != "eventsent-index/1":
            raise ValueError(f"unsupported index format: {doc.get('format')!r}")
        return cls(
            embeddings=np.array(doc["embeddings"]),
            pairs=[
                (EventTuple.from_list(p["event"]), list(p["sentence"]))
                for p in doc["pairs"]
            ],
            token_vectors={t: np.array(v) for t, v in doc["token_vectors"].items()},
            dim=doc["dim"],
        )


def build_index(
    pairs: Sequence[tuple[EventTuple, GeneralizedSentence]],
    dim: int = 32,
    seed: int = 0,
) -> RetrievalIndex:
    """Learn token vectors by factorizing the event-token x sentence-token
    co-occurrence matrix, then embed each pair's event as the normalized
    mean of its slot-token vectors."""
    if not pairs:
        raise EmptyCorpus("no pairs to index")
    event_tokens = sorted({t for e, _ in pairs for t in e.tokens()})
    sent_tokens = sorted({t for _, s in pairs for t in s})
    e_idx = {t: i for i, t in enumerate(event_tokens)}
    s_idx = {t: i for i, t in enumerate(sent_tokens)}
    cooc = np.zeros((len(event_tokens), len(sent_tokens)))
    for event, sentence in pairs:
        for et in event.tokens():
            for st in sentence:
                cooc[e_idx[et], s_idx[st]] += 1.0
    cooc = np.log1p(cooc)
    u, sv, _ = np.linalg.svd(cooc, full_matrices=False)
    k = min(dim, u.shape[1])
    token_vectors = {t: u[e_idx[t], :k] * sv[:k] for t in event_tokens}

    index = RetrievalIndex(
        embeddings=np.zeros((len(pairs), k)),
        pairs=[(e, list(s)) for e, s in pairs],
        token_vectors=token_vectors,
        dim=k,
    )
    for i, (event, _) in enumerate(pairs):
        index.embeddings[i] = index.embed_event(event)
    return index


def distance_between(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine distance mapped into [0, 1] as (1 - cos)/2; zero vectors are
    maximally uninformative (cos 0, distance 0.5)."""
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    cos = float(a @ b / (na * nb)) if na > 0 and nb > 0 else 0.0
    d = (1.0 - cos) / 2.0
    d = min(max(d, 0.0), 1.0)
    return 0.0 if d < _SNAP else d


def retrieve(
    index: RetrievalIndex, event: EventTuple
) -> tuple[tuple[EventTuple, GeneralizedSentence], float]:
    """Exact nearest neighbor by brute-force scan; ties go to the lowest
    pair id."""
    if len(index) == 0:
        raise EmptyCorpus("empty index")
    q = index.embed_event(event)
    norms = np.linalg.norm(index.embeddings, axis=1)
    qn = np.linalg.norm(q)
    with np.errstate(invalid="ignore", divide="ignore"):
        cos = np.where(
            (norms > 0) & (qn > 0), index.embeddings @ q / (norms * qn), 0.0
        )
    dists = np.clip((1.0 - cos) / 2.0, 0.0, 1.0)
    dists[dists < _SNAP] = 0.0
    best = int(np.argmin(dists))  # argmin takes the first (lowest id) on ties
    return index.pairs[best], float(dists[best])


def retedit_confidence(distance: float) -> float:
    if not 0.0 <= distance <= 1.0:
        raise ValueError("distance must lie in [0, 1]")
    return 1.0 - distance


def retedit_realize(
    index: RetrievalIndex,
    event: EventTuple,
    editor: Optional[EditorModel] = None,
) -> tuple[GeneralizedSentence, float]:
    """Full retrieve-and-edit pass.  A distance-0 hit returns the training
    sentence without modifications."""
    (ret_event, ret_sentence), dist = retrieve(index, event)
    if dist == 0.0:
        return list(ret_sentence), retedit_confidence(dist)
    editor = editor or SlotSubstitutionEditor()
    return editor.edit(event, ret_event, ret_sentence), retedit_confidence(dist)
