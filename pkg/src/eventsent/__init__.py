"""eventsent: guided realization of abstract plot events into sentences."""

__version__ = "0.1.0"

from .types import EventTuple, GeneralizedSentence, detokenize  # noqa: F401
