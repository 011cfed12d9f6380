import pytest

from eventsent.lexicon import (
    Lexicon,
    UnknownLemma,
    UnknownVerb,
    classify_verb,
    generalize_noun,
    load_gender_csv,
    load_lexicon,
    normalize_pos,
)


def test_generalize_noun_two_hops(lexicon):
    # barge.n.01 -> boat.n.01 -> vessel.n.02
    assert generalize_noun("barge", "NN", lexicon) == "vessel.n.02"
    # bounty.n.01 -> prize.n.01 -> bounty.n.04
    assert generalize_noun("bounty", "NN", lexicon) == "bounty.n.04"


def test_generalize_noun_clamps_at_root(lexicon):
    # entity.n.01 has no hypernym: the walk stops there
    assert generalize_noun("entity", "NN", lexicon) == "entity.n.01"


def test_generalize_noun_unknown(lexicon):
    with pytest.raises(UnknownLemma):
        generalize_noun("zzzz", "NN", lexicon)


def test_classify_verb_and_inflections(lexicon):
    assert classify_verb("arrive", lexicon) == "escape-51.1-1"
    assert classify_verb("arrives", lexicon) == "escape-51.1-1"
    assert classify_verb("chasing", lexicon) == "chase-51.6"
    with pytest.raises(UnknownVerb):
        classify_verb("be", lexicon)


def test_classify_verb_lexicographic_first():
    lex = Lexicon(
        hypernyms={},
        hyponyms={},
        lemma_index={},
        verb_index={"run": ["run-51.3.2", "meander-47.7"]},
        frame_table={},
        gender_table={},
    )
    assert classify_verb("run", lex) == "meander-47.7"


def test_class_members_sorted(lexicon):
    assert lexicon.class_members("escape-51.1-1") == ["arrive", "depart", "escape"]
    assert lexicon.class_members("no-such-1") == []


def test_is_descendant(lexicon):
    assert lexicon.is_descendant("barge.n.01", "vessel.n.02")
    assert lexicon.is_descendant("vessel.n.02", "vessel.n.02")
    assert not lexicon.is_descendant("vessel.n.02", "barge.n.01")
    assert not lexicon.is_descendant("event.n.01", "vessel.n.02")


def test_hypernym_cycle_rejected(tmp_path):
    import json

    doc = {
        "hypernyms": {"a.n.01": "b.n.01", "b.n.01": "a.n.01"},
        "hyponyms": {},
        "lemma_index": {},
        "verb_classes": {},
        "frames": {},
    }
    p = tmp_path / "lex.json"
    p.write_text(json.dumps(doc))
    with pytest.raises(ValueError, match="cycle"):
        load_lexicon(p)


def test_gender_csv_threshold(fixtures_dir):
    table = load_gender_csv(fixtures_dir / "gender.csv", threshold=0.8)
    assert table["kira"] == "fem"       # 95%
    assert table["odo"] == "masc"       # 100%
    assert table["julian"] == "masc"    # 88%
    assert table["yani"] == "unknown"   # 55% majority only


def test_normalize_pos():
    assert normalize_pos("NNS") == "n"
    assert normalize_pos("VBZ") == "v"
    assert normalize_pos("JJ") == "a"
    assert normalize_pos("RB") == "r"
