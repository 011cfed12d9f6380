import json

from eventsent.eventify import (
    ParsedSentence,
    eventify_corpus,
    eventify_sentence,
    generalize_sentence,
    split_corpus,
    split_sentence,
)
from eventsent.memory import StoryMemory, tag_entity
from eventsent.types import EventTuple


def sbar_sentence() -> ParsedSentence:
    """'She says that he is upset.'"""
    tokens = [
        ("She", "she", "PRP"),
        ("says", "say", "VBZ"),
        ("that", "that", "IN"),
        ("he", "he", "PRP"),
        ("is", "be", "VBZ"),
        ("upset", "upset", "JJ"),
        (".", ".", "."),
    ]
    deps = [
        (-1, 1, "root"),
        (1, 0, "nsubj"),
        (1, 4, "ccomp"),
        (4, 2, "mark"),
        (4, 3, "nsubj"),
        (4, 5, "acomp"),
    ]
    cons = [(0, 6, "S"), (2, 6, "SBAR")]
    return ParsedSentence(tokens, deps, [], cons)


def test_sbar_split_golden():
    pieces = split_sentence(sbar_sentence())
    surfaces = [[t[0] for t in p.tokens] for p in pieces]
    assert surfaces == [["She", "says", "."], ["He", "is", "upset", "."]]


def test_conjunction_split():
    tokens = [
        ("Kira", "kira", "NNP"),
        ("arrives", "arrive", "VBZ"),
        ("and", "and", "CC"),
        ("Odo", "odo", "NNP"),
        ("departs", "depart", "VBZ"),
        (".", ".", "."),
    ]
    deps = [
        (-1, 1, "root"),
        (1, 0, "nsubj"),
        (1, 2, "cc"),
        (1, 4, "conj"),
        (4, 3, "nsubj"),
    ]
    cons = [(0, 2, "S"), (3, 5, "S")]
    s = ParsedSentence(tokens, deps, [(0, 1, "PERSON"), (3, 4, "PERSON")], cons)
    pieces = split_sentence(s)
    surfaces = [[t[0] for t in p.tokens] for p in pieces]
    assert surfaces == [["Kira", "arrives", "."], ["Odo", "departs", "."]]


def test_no_split_identity():
    s = ParsedSentence(
        [("Kira", "kira", "NNP"), ("arrives", "arrive", "VBZ"), (".", ".", ".")],
        [(-1, 1, "root"), (1, 0, "nsubj")],
        [(0, 1, "PERSON")],
    )
    assert split_sentence(s) == [s]


def svopp_sentence() -> ParsedSentence:
    """'Kira sends the barge to the outpost.'"""
    tokens = [
        ("Kira", "kira", "NNP"),
        ("sends", "send", "VBZ"),
        ("the", "the", "DT"),
        ("barge", "barge", "NN"),
        ("to", "to", "IN"),
        ("the", "the", "DT"),
        ("outpost", "outpost", "NN"),
        (".", ".", "."),
    ]
    deps = [
        (-1, 1, "root"),
        (1, 0, "nsubj"),
        (1, 3, "dobj"),
        (3, 2, "det"),
        (1, 4, "prep"),
        (4, 6, "pobj"),
        (6, 5, "det"),
    ]
    return ParsedSentence(tokens, deps, [(0, 1, "PERSON")])


def test_eventify_sentence_slots(lexicon):
    memory = StoryMemory()
    event = eventify_sentence(svopp_sentence(), memory, lexicon)
    assert event == EventTuple(
        "<PERSON>0", "send-11.1", "vessel.n.02", "to", "region.n.03"
    )


def test_generalize_sentence(lexicon):
    memory = StoryMemory()
    sent = generalize_sentence(svopp_sentence(), memory, lexicon)
    assert sent == [
        "<PERSON>0", "send", "the", "vessel.n.02", "to", "the", "region.n.03", ".",
    ]


def test_entity_tag_numbering_dense():
    memory = StoryMemory()
    assert tag_entity("Kira", "PERSON", memory) == "<PERSON>0"
    assert tag_entity("Odo", "PERSON", memory) == "<PERSON>1"
    assert tag_entity("Kira", "PERSON", memory) == "<PERSON>0"  # idempotent
    assert tag_entity("Starfleet", "ORG", memory) == "<ORG>0"  # per-category


def test_split_corpus_ratio_and_determinism(stories):
    split = split_corpus(stories, seed=0)
    n = len(stories)
    assert len(split.validation) == round(n / 10)
    assert len(split.test) == round(n / 10)
    assert len(split.train) == n - len(split.validation) - len(split.test)
    ids = [s.id for s in split.train + split.validation + split.test]
    assert sorted(ids) == sorted(s.id for s in stories)
    assert len(set(ids)) == n  # disjoint

    again = split_corpus(stories, seed=0)
    assert [s.id for s in again.train] == [s.id for s in split.train]
    other = split_corpus(stories, seed=1)
    assert [s.id for s in other.train] != [s.id for s in split.train]


def test_eventify_corpus_byte_determinism(stories, lexicon):
    def run():
        per_story, split = eventify_corpus(stories, lexicon, seed=7)
        return json.dumps(
            {
                "splits": [[s.id for s in sub] for sub in (split.train, split.validation, split.test)],
                "pairs": {
                    sid: [[e.to_list(), sent] for e, sent in pairs]
                    for sid, pairs in per_story.items()
                },
            },
            sort_keys=True,
        )

    assert run() == run()


def test_eventified_pairs_nonempty(train_pairs):
    assert len(train_pairs) > 100
    for event, sentence in train_pairs[:50]:
        assert event.v
        assert sentence
