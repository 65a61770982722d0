"""
Simulation events, the job queue and event-log records.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import IntEnum
from typing import Deque, Iterator, Optional

from topoman.admission.request import Request


class EventKind(IntEnum):
    """
    Event kinds; at equal times lower values run first.
    """

    LEASE_EXPIRY = 0
    ARRIVAL = 1
    ADMISSION_ATTEMPT = 2
    SAMPLE = 3

    @property
    def label(self) -> str:
        """Name used in the event log."""
        return _LABELS[self]


_LABELS = {
    EventKind.LEASE_EXPIRY: "expiry",
    EventKind.ARRIVAL: "arrival",
    EventKind.ADMISSION_ATTEMPT: "attempt",
    EventKind.SAMPLE: "sample",
}


@dataclass(frozen=True, order=True)
class SimEvent:
    """
    A scheduled event, ordered by ``(time, kind, payload)``.

    :ivar time: Tick the event fires at.
    :ivar kind: What happens.
    :ivar payload: Request id, or the tick for samples.
    """

    time: int
    kind: EventKind
    payload: str


@dataclass(frozen=True)
class EventRecord:
    """
    One line of the event log.

    :ivar time: Tick.
    :ivar kind: Event label.
    :ivar id: Request id or sample tick.
    :ivar detail: Free text.
    """

    time: int
    kind: str
    id: str
    detail: str = ""


@dataclass(frozen=True)
class DecisionRecord:
    """
    One admission outcome as exported to ``decisions.csv``.

    :ivar request_id: The request.
    :ivar time: Tick of the decision.
    :ivar outcome: ``admitted`` or ``rejected``.
    :ivar detail: The path taken, or the rejection reason code and text.
    """

    request_id: str
    time: int
    outcome: str
    detail: str


class JobQueue:
    """
    FIFO queue of requests waiting for an admission attempt.
    """

    def __init__(self):
        self._items: Deque[Request] = deque()

    def __len__(self) -> int:
        return len(self._items)

    def __bool__(self) -> bool:
        return bool(self._items)

    def __iter__(self) -> Iterator[Request]:
        return iter(self._items)

    def push(self, request: Request) -> None:
        """Append ``request`` at the tail."""
        self._items.append(request)

    def head(self) -> Optional[Request]:
        """The request at the head, or ``None``."""
        return self._items[0] if self._items else None

    def pop(self) -> Request:
        """
        Remove and return the head.

        :raises IndexError: If the queue is empty.
        """
        return self._items.popleft()
