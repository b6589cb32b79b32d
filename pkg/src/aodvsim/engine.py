"""Event queue, simulation clock and seeded random streams.

Every stochastic concern draws from its own :class:`RandomStream`, derived
from the scenario seed with numpy's ``SeedSequence`` spawn keys and the PCG64
bit generator, so adding attackers never perturbs mobility or traffic draws.
"""

from __future__ import annotations

import enum
import heapq
import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np


class SimulationError(RuntimeError):
    """A run-time invariant was violated; the run is aborted."""


class ScheduleError(SimulationError):
    pass


class EventKind(enum.Enum):
    FRAME_DELIVERY = "FrameDelivery"
    TIMER_EXPIRY = "TimerExpiry"
    TRAFFIC_GENERATION = "TrafficGeneration"
    WAYPOINT_ARRIVAL = "WaypointArrival"
    SIMULATION_END = "SimulationEnd"


@dataclass(order=True)
class Event:
    time: float
    seq: int
    kind: EventKind = field(compare=False)
    payload: Any = field(default=None, compare=False)


class Simulator:
    """Single-threaded discrete-event loop.

    Events run in ``(time, seq)`` order, where ``seq`` is a global insertion
    counter, so simultaneous events keep their scheduling order.
    """

    def __init__(self, trace: Callable[[Event], None] | None = None):
        self.now = 0.0
        self.processed = 0
        self.trace = trace
        self._queue: list[tuple[float, int, Event]] = []
        self._counter = itertools.count()
        self._handlers: dict[EventKind, Callable[[Event], None]] = {}
        self._stopped = False

    def on(self, kind: EventKind, handler: Callable[[Event], None]) -> None:
        self._handlers[kind] = handler

    def schedule(self, time: float, kind: EventKind, payload: Any = None) -> Event:
        if not time >= self.now:
            raise ScheduleError(
                f"cannot schedule {kind.value} at t={time!r}: clock is already at {self.now!r}"
            )
        event = Event(time, next(self._counter), kind, payload)
        heapq.heappush(self._queue, (time, event.seq, event))
        return event

    def stop(self) -> None:
        self._stopped = True

    def __len__(self) -> int:
        return len(self._queue)

    def peek(self) -> Event | None:
        return self._queue[0][2] if self._queue else None

    def run(self, until: float = math.inf) -> int:
        """Process events with ``time <= until``; returns the number processed."""
        queue = self._queue
        handlers = self._handlers
        count = 0
        self._stopped = False
        while queue and not self._stopped:
            if queue[0][0] > until:
                break
            _, _, event = heapq.heappop(queue)
            self.now = event.time
            if self.trace is not None:
                self.trace(event)
            handler = handlers.get(event.kind)
            if handler is None:
                raise SimulationError(f"no handler registered for {event.kind.value}")
            handler(event)
            count += 1
        self.processed += count
        return count


class StreamId(enum.IntEnum):
    MOBILITY = 0
    TRAFFIC = 1
    PACKET_SIZE = 2
    ATTACKER_CHOICE = 3


class RandomStream:
    """An independent PCG64 stream keyed by ``(seed, stream_id)``."""

    def __init__(self, seed: int, stream_id: StreamId):
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = int(seed)
        self.stream_id = StreamId(stream_id)
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(int(self.stream_id),))
        self.generator = np.random.Generator(np.random.PCG64(seq))

    def uniform(self, lo: float, hi: float) -> float:
        return draw_uniform(self, lo, hi)

    def exponential(self, mean: float) -> float:
        return draw_exponential(self, mean)


def make_streams(seed: int) -> dict[StreamId, RandomStream]:
    return {sid: RandomStream(seed, sid) for sid in StreamId}


def draw_uniform(stream: RandomStream, lo: float, hi: float) -> float:
    if not lo < hi:
        raise ValueError(f"uniform draw needs lo < hi, got [{lo}, {hi})")
    value = lo + (hi - lo) * stream.generator.random()
    # rounding can land exactly on hi
    if value >= hi:
        value = math.nextafter(hi, lo)
    return value


def draw_exponential(stream: RandomStream, mean: float) -> float:
    if not mean > 0:
        raise ValueError(f"exponential draw needs mean > 0, got {mean}")
    value = 0.0
    while value <= 0.0:
        value = mean * stream.generator.standard_exponential()
    return value
