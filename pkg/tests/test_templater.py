import math

import pytest

from eventsent.templater import (
    FrameSpec,
    TemplateConfig,
    predict_frame,
    realize_template,
    template_confidence,
    word_pos,
)
from eventsent.types import EventTuple

# insertion threshold above any probability: anchors only, no filled blanks
CONSERVATIVE = TemplateConfig(insertion_threshold=1e9)


def test_word_pos_classes(lexicon):
    assert word_pos("the") == "det"
    assert word_pos("to") == "prep"
    assert word_pos("vessel.n.02") == "noun"
    assert word_pos("<PERSON>0") == "noun"
    assert word_pos("<PRP>") == "noun"
    assert word_pos("send-11.1") == "verb"
    assert word_pos("send", lexicon) == "verb"
    assert word_pos("upset") == "other"


def test_frame_spec_validation():
    with pytest.raises(ValueError):
        FrameSpec(("NP", "NP"))
    with pytest.raises(ValueError):
        FrameSpec(("NP", "V", "XX"))


def test_predict_frame_signature_lookup(frame_map):
    ev = EventTuple("<PRP>", "act-114-1-1", None, "to", "event.n.01")
    assert predict_frame(ev, frame_map).symbols == ("NP", "V", "PP")
    full = EventTuple("a.n.01", "v-1.1", "b.n.01", "to", "c.n.01")
    assert predict_frame(full, frame_map).symbols == ("NP", "V", "NP", "PP")


def test_predict_frame_prefers_licensed(frame_map, lexicon):
    # signature s,v,o maps to NP V NP; escape-51.1-1 licenses NP V / NP V PP,
    # so the same-arity licensed frame NP V PP replaces it
    ev = EventTuple("<PERSON>0", "escape-51.1-1", "vessel.n.02", None, None)
    assert predict_frame(ev, frame_map, lexicon).symbols == ("NP", "V", "PP")


def test_table_example_verbatim(forward_model, backward_model):
    """⟨<PRP>, act-114-1-1, ∅, to, event.n.01⟩ realizes literally."""
    ev = EventTuple("<PRP>", "act-114-1-1", None, "to", "event.n.01")
    frame = predict_frame(ev)
    tokens, conf = realize_template(ev, frame, forward_model, backward_model, CONSERVATIVE)
    assert tokens == ["<PRP>", "act-114-1-1", "to", "event.n.01", "."]
    assert 0.0 <= conf <= 1.0


def test_entity_subject_gets_determiner(forward_model, backward_model):
    ev = EventTuple("<ORG>0", "assessment-34.1", "vessel.n.02", None, None)
    tokens, _ = realize_template(
        ev, predict_frame(ev), forward_model, backward_model, CONSERVATIVE
    )
    assert tokens == ["the", "<ORG>0", "assessment-34.1", "vessel.n.02", "."]


def test_all_event_tokens_always_present(forward_model, backward_model, sample_events, lexicon, frame_map):
    for seed in range(40):
        for ev in sample_events[:10]:
            cfg = TemplateConfig(rng_seed=seed)
            tokens, conf = realize_template(
                ev, predict_frame(ev, frame_map, lexicon),
                forward_model, backward_model, cfg, lexicon,
            )
            present = set(tokens)
            for tok in ev.tokens():
                assert tok in present, (ev, tokens)
            # grammar: no det-det or noun-noun bigrams
            for a, b in zip(tokens, tokens[1:]):
                pa, pb = word_pos(a, lexicon), word_pos(b, lexicon)
                assert not (pa == "det" and pb == "det"), tokens
                assert not (pa == "noun" and pb == "noun"), tokens
            assert tokens[-1] == "."
            assert 0.0 <= conf <= 1.0


def test_confidence_arithmetic():
    # |V| = 256 -> cap 8 bits; mean loss 3 bits -> confidence 0.625
    assert template_confidence([3.0, 3.0, 3.0], 3, 256) == pytest.approx(0.625)
    # losses above the cap clamp at zero
    assert template_confidence([100.0], 1, 4) == 0.0
    # zero loss -> full confidence
    assert template_confidence([0.0, 0.0], 2, 256) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        template_confidence([], 0, 256)


def test_confidence_matches_formula(forward_model, backward_model):
    ev = EventTuple("<PRP>", "act-114-1-1", None, "to", "event.n.01")
    tokens, conf = realize_template(
        ev, predict_frame(ev), forward_model, backward_model, CONSERVATIVE
    )
    import numpy as np

    body = tokens[:-1]
    losses = []
    for i, tok in enumerate(body):
        vec = forward_model.next_distribution(None, body[:i])
        losses.append(-math.log2(vec[forward_model.vocab.id_of(tok)]))
    want = 1.0 - min(1.0, sum(losses) / len(body) / math.log2(len(forward_model.vocab)))
    assert conf == pytest.approx(want)
