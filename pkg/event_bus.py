from collections import deque

from events import Event

_queue: deque[Event] = deque()


def publish(event: Event) -> None:
    _queue.append(event)


def drain() -> list[Event]:
    events: list[Event] = []
    while _queue:
        events.append(_queue.popleft())
    return events
