"""Wires the five realizers into ensemble members and drives the
realize -> slot-fill pipeline stage."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .decoders import (
    MCBeamConfig,
    beam_decode,
    build_constraint_fsm,
    fsm_decode,
    mc_beam_decode,
)
from .ensemble import CascadeDecision, EnsembleConfig, Member, cascade_realize
from .lexicon import Lexicon
from .ngram import NGramModel
from .retedit import RetrievalIndex, retedit_realize
from .slotfill import EntityPool, fill_sentence
from .memory import StoryMemory
from .templater import TemplateConfig, predict_frame, realize_template
from .types import EventTuple, GeneralizedSentence


@dataclass
class RealizerSuite:
    forward_model: NGramModel
    backward_model: NGramModel
    index: RetrievalIndex
    lexicon: Lexicon
    frame_map: Optional[dict[str, list[str]]] = None
    mc_config: MCBeamConfig = field(default_factory=MCBeamConfig)
    template_config: TemplateConfig = field(default_factory=TemplateConfig)
    beam_width: int = 5
    max_length: int = 12
    fsm_min_matched: Optional[int] = None
    fsm_horizon: int = 25

    def _beam(self, event: EventTuple) -> tuple[GeneralizedSentence, float]:
        sentence = beam_decode(
            self.forward_model, event, width=self.beam_width, max_length=self.max_length
        )
        # geometric-mean token probability keeps the confidence in [0, 1]
        conf = float(2.0 ** -self.forward_model.sentence_nll(event, sentence))
        return sentence, conf

    def _fsm(self, event: EventTuple) -> tuple[Optional[GeneralizedSentence], float]:
        fsm = build_constraint_fsm(
            event,
            min_matched=self.fsm_min_matched,
            state_beam_capacity=self.beam_width,
            expansion_width=self.beam_width,
            time_horizon=self.fsm_horizon,
        )
        sentence = fsm_decode(self.forward_model, event, fsm)
        return sentence, 1.0 if sentence is not None else 0.0

    def members(self) -> dict[str, Member]:
        return {
            "retedit": lambda e: retedit_realize(self.index, e),
            "templates": lambda e: realize_template(
                e,
                predict_frame(e, self.frame_map, self.lexicon),
                self.forward_model,
                self.backward_model,
                self.template_config,
                self.lexicon,
            ),
            "mc_beam": lambda e: mc_beam_decode(self.forward_model, e, self.mc_config),
            "fsm": self._fsm,
            "beam": self._beam,
        }


def realize_events(
    events: list[EventTuple],
    suite: RealizerSuite,
    config: EnsembleConfig,
) -> list[CascadeDecision]:
    members = suite.members()
    return [cascade_realize(event, members, config) for event in events]


def fill_decisions(
    decisions: list[CascadeDecision],
    pool: EntityPool,
    lexicon: Lexicon,
    seed: int = 0,
) -> list[str]:
    """Slot-fill one run's generalized sentences with a single shared
    story memory (the event file is treated as one story)."""
    memory = StoryMemory()
    rng = np.random.default_rng(seed)
    return [
        fill_sentence(d.sentence, memory, pool, lexicon, rng) for d in decisions
    ]
