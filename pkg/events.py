from typing import Literal, NamedTuple

EventType = Literal[
    "phase_started",
    "progress",
    "phase_finished",
]


class Event(NamedTuple):
    type: EventType
    data: dict
