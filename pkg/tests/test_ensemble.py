import itertools

import pytest

from eventsent.ensemble import (
    MEMBER_ORDER,
    THRESHOLDED,
    EnsembleConfig,
    UtilizationReport,
    cascade_realize,
    render_utilization,
    tune_thresholds,
    utilization,
)
from eventsent.metrics import bleu4
from eventsent.types import EventTuple

EV = EventTuple("a.n.01", "v-1.1", None, None, None)


def scripted(confidences, sentences=None, fsm_fails=False):
    """Members returning fixed confidences (and per-member sentences)."""
    sentences = sentences or {m: [m, "out", ".", "pad"] for m in MEMBER_ORDER}

    def make(name):
        def member(event):
            if name == "fsm" and fsm_fails:
                return None, 0.0
            return list(sentences[name]), confidences.get(name, 0.5)

        return member

    return {name: make(name) for name in MEMBER_ORDER}


def test_config_validation():
    EnsembleConfig({m: 0.5 for m in THRESHOLDED})
    with pytest.raises(ValueError):
        EnsembleConfig({"retedit": 0.5})  # missing thresholds
    with pytest.raises(ValueError):
        EnsembleConfig({m: 0.5 for m in THRESHOLDED}, members=("beam", "retedit"))
    with pytest.raises(ValueError):
        EnsembleConfig({"retedit": 0.5, "templates": 0.5},
                       members=("retedit", "templates", "fsm"))


def test_first_passing_member_wins():
    cfg = EnsembleConfig({"retedit": 0.8, "templates": 0.6, "mc_beam": 0.4})
    members = scripted({"retedit": 0.9})
    d = cascade_realize(EV, members, cfg)
    assert d.member_used == "retedit"
    assert d.invoked == ["retedit"]

    members = scripted({"retedit": 0.79, "templates": 0.61})
    d = cascade_realize(EV, members, cfg)
    assert d.member_used == "templates"
    assert d.invoked == ["retedit", "templates"]


def test_full_fallthrough_reaches_beam():
    cfg = EnsembleConfig({"retedit": 0.99, "templates": 0.99, "mc_beam": 0.99})
    members = scripted({m: 0.1 for m in MEMBER_ORDER}, fsm_fails=True)
    d = cascade_realize(EV, members, cfg)
    assert d.member_used == "beam"
    assert d.invoked == list(MEMBER_ORDER)


def test_fsm_success_is_unconditional_acceptance():
    cfg = EnsembleConfig({"retedit": 0.99, "templates": 0.99, "mc_beam": 0.99})
    members = scripted({m: 0.1 for m in MEMBER_ORDER}, fsm_fails=False)
    d = cascade_realize(EV, members, cfg)
    assert d.member_used == "fsm"


def test_threshold_boundary_is_inclusive():
    cfg = EnsembleConfig({"retedit": 0.5, "templates": 0.9, "mc_beam": 0.9})
    d = cascade_realize(EV, scripted({"retedit": 0.5}), cfg)
    assert d.member_used == "retedit"


def test_tune_matches_independent_grid_oracle():
    """Stubbed members with event-dependent confidences; oracle re-runs the
    whole grid independently with the same tie rule (highest thresholds)."""
    gold = ["retedit", "out", ".", "pad"]
    events = [
        EventTuple(f"e{i}.n.01", "v-1.1", None, None, None) for i in range(6)
    ]
    pairs = [(e, list(gold)) for e in events]

    def conf(name, event):
        # deterministic pseudo-confidence per (member, event)
        return (hash((name, event.s)) % 100) / 100.0

    def make(name):
        def member(event):
            sent = gold if name == "retedit" else [name, "bad", "x", "y"]
            return list(sent), conf(name, event)

        return member

    members = {name: make(name) for name in MEMBER_ORDER}
    grid = {m: [0.2, 0.5, 0.8] for m in THRESHOLDED}
    got = tune_thresholds(pairs, members, grid)

    # oracle: exhaustive evaluation; ties -> lexicographically largest combo
    best = None
    for combo in itertools.product(*[sorted(grid[m]) for m in THRESHOLDED]):
        thresholds = dict(zip(THRESHOLDED, combo))
        cfg = EnsembleConfig(thresholds)
        score = sum(
            bleu4(cascade_realize(e, members, cfg).sentence, [g]) for e, g in pairs
        ) / len(pairs)
        key = (score, combo)
        if best is None or key > best[0]:
            best = (key, thresholds)
    assert got == best[1]

    with pytest.raises(ValueError):
        tune_thresholds([], members, grid)
    with pytest.raises(ValueError):
        tune_thresholds(pairs, members, {"retedit": [0.5]})


def test_utilization_sums_to_100():
    cfg = EnsembleConfig({"retedit": 0.8, "templates": 0.6, "mc_beam": 0.4})
    decisions = []
    for conf_r in (0.9, 0.1, 0.95):
        decisions.append(cascade_realize(EV, scripted({"retedit": conf_r}), cfg))
    report = utilization(decisions, source="valid")
    assert sum(report.percentages.values()) == pytest.approx(100.0)
    assert report.percentages["retedit"] == pytest.approx(200.0 / 3)
    with pytest.raises(ValueError):
        utilization([])
    with pytest.raises(ValueError):
        UtilizationReport({"retedit": 55.0, "beam": 30.0})


def test_render_utilization_format():
    report = UtilizationReport(
        {"retedit": 40.0, "templates": 30.0, "mc_beam": 15.0, "fsm": 10.0, "beam": 5.0},
        source="test",
    )
    text = render_utilization([report])
    lines = text.splitlines()
    assert len(lines) == 3  # header, rule, one data row
    for col in ("RetEdit", "Templates", "Monte Carlo", "FSM", "Seq2seq"):
        assert col in lines[0]
    assert "40.00" in lines[2] and "5.00" in lines[2]
