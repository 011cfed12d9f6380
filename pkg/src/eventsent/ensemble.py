"""Cascading ensemble: fixed member order, per-member confidence
thresholds, fallthrough, grid-search tuning, and utilization reporting."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .metrics import bleu4
from .types import EventTuple, GeneralizedSentence

MEMBER_ORDER = ("retedit", "templates", "mc_beam", "fsm", "beam")
THRESHOLDED = ("retedit", "templates", "mc_beam")

# A member realizes an event into (sentence | None, confidence).  A None
# sentence is the FSM's Failure outcome and always falls through.
Member = Callable[[EventTuple], tuple[Optional[GeneralizedSentence], float]]


@dataclass
class EnsembleConfig:
    thresholds: dict[str, float]
    members: tuple[str, ...] = MEMBER_ORDER

    def __post_init__(self) -> None:
        expected = [m for m in self.members if m in THRESHOLDED]
        if sorted(self.thresholds) != sorted(expected):
            raise ValueError(
                f"thresholds must cover exactly {expected}, got {sorted(self.thresholds)}"
            )
        if tuple(m for m in MEMBER_ORDER if m in self.members) != self.members:
            raise ValueError("members must follow the fixed cascade order")
        if self.members[-1] != "beam":
            raise ValueError("beam must terminate the cascade")


@dataclass
class CascadeDecision:
    event: EventTuple
    sentence: GeneralizedSentence
    member_used: str
    confidence: float
    invoked: list[str] = field(default_factory=list)


def cascade_realize(
    event: EventTuple,
    members: dict[str, Member],
    config: EnsembleConfig,
) -> CascadeDecision:
    """Query members in the fixed order, returning the first whose
    acceptance rule passes.  FSM is accepted iff it succeeds; beam is
    unconditional, so the cascade never fails."""
    invoked: list[str] = []
    for name in config.members:
        invoked.append(name)
        sentence, confidence = members[name](event)
        if name == "beam":
            accepted = True
        elif name == "fsm":
            accepted = sentence is not None
        else:
            accepted = confidence >= config.thresholds[name]
        if accepted and sentence is not None:
            return CascadeDecision(event, sentence, name, confidence, invoked)
    raise AssertionError("beam member must always return a sentence")


def tune_thresholds(
    validation_pairs: Sequence[tuple[EventTuple, GeneralizedSentence]],
    members: dict[str, Member],
    grid: dict[str, Sequence[float]],
    member_order: tuple[str, ...] = MEMBER_ORDER,
) -> dict[str, float]:
    """Exhaustive grid search maximizing mean sentence BLEU-4 on the
    validation pairs.  Ties prefer higher thresholds (more fallthrough)."""
    if not validation_pairs:
        raise ValueError("empty validation set")
    names = [m for m in member_order if m in THRESHOLDED and m in members]
    if sorted(grid) != sorted(names):
        raise ValueError(f"grid must cover exactly {names}")
    # descending iteration makes the first argmax the highest-threshold tie
    axes = [sorted(grid[name], reverse=True) for name in names]
    best_score = -1.0
    best: dict[str, float] = {}
    for combo in itertools.product(*axes):
        thresholds = dict(zip(names, combo))
        config = EnsembleConfig(thresholds, members=tuple(m for m in member_order if m in members))
        score = 0.0
        for event, gold in validation_pairs:
            decision = cascade_realize(event, members, config)
            score += bleu4(decision.sentence, [gold]) if decision.sentence else 0.0
        score /= len(validation_pairs)
        if score > best_score:
            best_score = score
            best = thresholds
    return best


@dataclass
class UtilizationReport:
    percentages: dict[str, float]
    source: str = "test"

    def __post_init__(self) -> None:
        total = sum(self.percentages.values())
        if abs(total - 100.0) > 0.01:
            raise ValueError(f"utilization must sum to 100, got {total}")


def utilization(
    decisions: Sequence[CascadeDecision], source: str = "test"
) -> UtilizationReport:
    if not decisions:
        raise ValueError("empty run log")
    pct = {name: 0.0 for name in MEMBER_ORDER}
    for d in decisions:
        pct[d.member_used] += 1.0
    for name in pct:
        pct[name] = 100.0 * pct[name] / len(decisions)
    return UtilizationReport(pct, source)


_DISPLAY = {
    "retedit": "RetEdit",
    "templates": "Templates",
    "mc_beam": "Monte Carlo",
    "fsm": "FSM",
    "beam": "Seq2seq",
}


def render_utilization(reports: Sequence[UtilizationReport]) -> str:
    """Text table, one column pair per member, one row per report source."""
    header = f"{'Run':<12}" + "".join(f"{_DISPLAY[m]:>14}" for m in MEMBER_ORDER)
    lines = [header, "-" * len(header)]
    for r in reports:
        lines.append(
            f"{r.source:<12}"
            + "".join(f"{r.percentages.get(m, 0.0):>14.2f}" for m in MEMBER_ORDER)
        )
    return "\n".join(lines)
