import numpy as np
import pytest

from eventsent.ngram import EmptyCorpus
from eventsent.retedit import (
    RetrievalIndex,
    SlotSubstitutionEditor,
    build_index,
    distance_between,
    retedit_confidence,
    retedit_realize,
    retrieve,
)
from eventsent.types import EventTuple


def test_training_query_is_distance_zero_verbatim(retrieval_index, train_pairs):
    event, sentence = train_pairs[0]
    (ret_ev, ret_sent), dist = retrieve(retrieval_index, event)
    assert dist == 0.0
    got, conf = retedit_realize(retrieval_index, event)
    assert conf == 1.0
    # distance zero: the retrieved training sentence comes back unedited
    assert got == ret_sent
    assert ret_ev.tokens()


def test_retrieve_matches_brute_force_oracle(train_pairs):
    # ~1,000-pair index by tiling the fixture pairs
    pairs = (train_pairs * (1000 // len(train_pairs) + 1))[:1000]
    index = build_index(pairs, dim=16)
    queries = [e for e, _ in train_pairs[:15]] + [
        EventTuple("<PERSON>0", "say-37.7", "vessel.n.02", "to", "event.n.01"),
        EventTuple(None, "discover-84", "music.n.01", None, None),
    ]
    for q in queries:
        qv = index.embed_event(q)
        dists = []
        for i in range(len(index)):
            dists.append(distance_between(qv, index.embeddings[i]))
        best = int(np.argmin(dists))  # first minimum = lowest pair id
        (_, want_sent), want_dist = index.pairs[best], dists[best]
        (_, got_sent), got_dist = retrieve(index, q)
        assert got_dist == pytest.approx(want_dist, abs=1e-9)
        assert got_sent == want_sent


def test_confidence_is_one_minus_distance(retrieval_index, sample_events):
    for ev in sample_events[:20]:
        _, dist = retrieve(retrieval_index, ev)
        _, conf = retedit_realize(retrieval_index, ev)
        assert conf == pytest.approx(1.0 - dist)
    assert retedit_confidence(0.25) == 0.75
    with pytest.raises(ValueError):
        retedit_confidence(1.5)


def test_distance_properties():
    a = np.array([1.0, 0.0])
    assert distance_between(a, a) == 0.0
    assert distance_between(a, -a) == 1.0
    assert distance_between(a, np.array([0.0, 1.0])) == 0.5
    assert distance_between(a, np.zeros(2)) == 0.5  # uninformative


def test_slot_substitution_editor():
    editor = SlotSubstitutionEditor()
    src = EventTuple("<PERSON>0", "send-11.1", "vessel.n.02", "to", "region.n.03")
    dst = EventTuple("<ORG>0", "send-11.1", "craft.n.02", "to", "region.n.03")
    sent = ["<PERSON>0", "send", "the", "vessel.n.02", "to", "the", "region.n.03", "."]
    got = editor.edit(dst, src, sent)
    assert got == ["<ORG>0", "send", "the", "craft.n.02", "to", "the", "region.n.03", "."]
    # all occurrences are substituted
    assert editor.edit(dst, src, ["vessel.n.02", "vessel.n.02"]) == ["craft.n.02", "craft.n.02"]


def test_unknown_event_embeds_to_zero(retrieval_index):
    ev = EventTuple("zz.n.99", "qq-1.1", None, None, None)
    assert np.allclose(retrieval_index.embed_event(ev), 0.0)
    # still retrieves something (distance 0.5 everywhere, lowest id wins)
    (_, sent), dist = retrieve(retrieval_index, ev)
    assert dist == 0.5 and sent


def test_index_serialization_roundtrip(retrieval_index, tmp_path, sample_events):
    p = tmp_path / "index.json"
    retrieval_index.save(p)
    loaded = RetrievalIndex.load(p)
    assert len(loaded) == len(retrieval_index)
    for ev in sample_events[:5]:
        assert retrieve(loaded, ev)[1] == pytest.approx(retrieve(retrieval_index, ev)[1])
    bad = tmp_path / "bad.json"
    bad.write_text('{"format": "nope"}')
    with pytest.raises(ValueError, match="format"):
        RetrievalIndex.load(bad)


def test_empty_index_rejected():
    with pytest.raises(EmptyCorpus):
        build_index([])
