"""Shared fixtures: the checked-in fixture corpus, lexicon, and models
trained on them (session-scoped so the suite trains once)."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from eventsent.eventify import eventify_corpus, story_from_dict
from eventsent.jsonl import read_jsonl
from eventsent.lexicon import load_lexicon
from eventsent.ngram import train
from eventsent.retedit import build_index
from eventsent.types import EventTuple

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon(FIXTURES / "lexicon.json")


@pytest.fixture(scope="session")
def stories():
    _, raw = read_jsonl(FIXTURES / "corpus.jsonl")
    return [story_from_dict(r) for r in raw]


@pytest.fixture(scope="session")
def eventified(stories, lexicon):
    """(per_story, split) over the fixture corpus at seed 0."""
    return eventify_corpus(stories, lexicon, seed=0)


def _pairs_for(per_story, subset):
    return [pair for story in subset for pair in per_story[story.id]]


@pytest.fixture(scope="session")
def train_pairs(eventified):
    per_story, split = eventified
    return _pairs_for(per_story, split.train)


@pytest.fixture(scope="session")
def valid_pairs(eventified):
    per_story, split = eventified
    return _pairs_for(per_story, split.validation)


@pytest.fixture(scope="session")
def test_pairs(eventified):
    per_story, split = eventified
    return _pairs_for(per_story, split.test)


@pytest.fixture(scope="session")
def forward_model(train_pairs):
    return train(train_pairs, order=3, copy_bias=0.3, direction="forward")


@pytest.fixture(scope="session")
def backward_model(train_pairs):
    return train(train_pairs, order=3, copy_bias=0.3, direction="backward")


@pytest.fixture(scope="session")
def retrieval_index(train_pairs):
    return build_index(train_pairs, dim=24, seed=0)


@pytest.fixture(scope="session")
def sample_events():
    _, records = read_jsonl(FIXTURES / "events_sample.jsonl")
    return [EventTuple.from_list(r["event"]) for r in records]


@pytest.fixture(scope="session")
def frame_map():
    with open(FIXTURES / "frame_map.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def toy_model():
    """Tiny order-2 model over a 6-token vocabulary (<s>, </s>, <unk>,
    a, b, c) with no copy bias, used for exhaustive-search oracles."""
    ev = EventTuple(None, "a", None, None, None)
    sentences = [
        ["a", "b"],
        ["a", "b", "c"],
        ["a", "b"],
        ["b", "c"],
        ["a"],
        ["c", "a", "b"],
    ]
    return train([(ev, s) for s in sentences], order=2, copy_bias=0.0)
