"""Traffic workload generation and packet-delivery-ratio accounting."""

from __future__ import annotations

import enum
import math
import statistics
from dataclasses import dataclass, field
from typing import Callable, Sequence

from aodvsim.engine import EventKind, RandomStream, SimulationError, Simulator, draw_exponential, draw_uniform


@dataclass(frozen=True)
class DataPacket:
    id: int
    source: int
    destination: int
    size: int  # bits
    created_at: float
    hops: int = 0  # links traversed so far, an IP TTL in reverse


@dataclass(frozen=True)
class TrafficConfig:
    flows: tuple[tuple[int, int], ...] = ((1, 4),)
    start: float = 0.0
    interarrival_min: float = 0.1
    interarrival_max: float = 0.11
    size_mean_bits: float = 1024.0


class Outcome(enum.Enum):
    DELIVERED = "delivered"
    DROPPED_NO_ROUTE = "dropped_no_route"
    DROPPED_BY_ATTACKER = "dropped_by_attacker"
    DROPPED_BUFFER = "dropped_buffer"


@dataclass
class RunMetrics:
    sent: int = 0
    delivered: int = 0
    dropped_no_route: int = 0
    dropped_by_attacker: int = 0
    dropped_buffer: int = 0
    in_flight_at_end: int = 0
    pdr: float = math.nan
    end_time: float = 0.0

    def conserved(self) -> bool:
        return self.sent == (
            self.delivered
            + self.dropped_no_route
            + self.dropped_by_attacker
            + self.dropped_buffer
            + self.in_flight_at_end
        )


def compute_pdr(metrics: RunMetrics) -> float:
    """Delivered over sent. Undefined (ValueError) when nothing was sent."""
    if metrics.sent <= 0:
        raise ValueError("packet delivery ratio is undefined for a run that sent no packets")
    return metrics.delivered / metrics.sent


@dataclass(frozen=True)
class PdrSummary:
    mean: float
    min: float
    max: float
    per_run: tuple[float, ...] = field(default=())


def aggregate(runs: Sequence[RunMetrics]) -> PdrSummary:
    if not runs:
        raise ValueError("cannot aggregate an empty list of runs")
    values = tuple(compute_pdr(m) for m in runs)
    return PdrSummary(statistics.fmean(values), min(values), max(values), values)


class PacketLedger:
    """Tracks every live packet until it reaches exactly one terminal bucket."""

    def __init__(self):
        self.live: dict[int, DataPacket] = {}
        self.sent = 0
        self.counts = {outcome: 0 for outcome in Outcome}

    def record_sent(self, packet: DataPacket) -> None:
        if packet.id in self.live:
            raise SimulationError(f"packet id {packet.id} reused")
        self.live[packet.id] = packet
        self.sent += 1

    def record(self, packet: DataPacket, outcome: Outcome) -> None:
        if self.live.pop(packet.id, None) is None:
            raise SimulationError(
                f"packet {packet.id} reached {outcome.value} but is not in flight"
            )
        self.counts[outcome] += 1

    def metrics(self, end_time: float) -> RunMetrics:
        m = RunMetrics(
            sent=self.sent,
            delivered=self.counts[Outcome.DELIVERED],
            dropped_no_route=self.counts[Outcome.DROPPED_NO_ROUTE],
            dropped_by_attacker=self.counts[Outcome.DROPPED_BY_ATTACKER],
            dropped_buffer=self.counts[Outcome.DROPPED_BUFFER],
            in_flight_at_end=len(self.live),
            end_time=end_time,
        )
        if m.sent:
            m.pdr = compute_pdr(m)
        return m


class TrafficGenerator:
    """Constant-bit-rate-ish flows: uniform inter-arrivals, exponential sizes.

    Packets are created while their creation time is strictly below
    ``duration``. Each new packet is handed to ``inject`` (the source node's
    forwarding entry point) after being recorded as sent.
    """

    def __init__(
        self,
        config: TrafficConfig,
        duration: float,
        sim: Simulator,
        arrivals: RandomStream,
        sizes: RandomStream,
        ledger: PacketLedger,
        inject: Callable[[DataPacket], None],
    ):
        self.config = config
        self.duration = duration
        self.sim = sim
        self.arrivals = arrivals
        self.sizes = sizes
        self.ledger = ledger
        self.inject = inject
        self._next_id = 0

    def start(self) -> None:
        for src, dst in self.config.flows:
            if src == dst:
                raise ValueError(f"flow source and destination are both node {src}")
        self.sim.on(EventKind.TRAFFIC_GENERATION, self._on_generate)
        if self.config.start < self.duration:
            for index in range(len(self.config.flows)):
                self.sim.schedule(self.config.start, EventKind.TRAFFIC_GENERATION, index)

    def _on_generate(self, event) -> None:
        cfg = self.config
        src, dst = cfg.flows[event.payload]
        size = max(1, round(draw_exponential(self.sizes, cfg.size_mean_bits)))
        packet = DataPacket(self._next_id, src, dst, size, event.time)
        self._next_id += 1
        self.ledger.record_sent(packet)
        gap = draw_uniform(self.arrivals, cfg.interarrival_min, cfg.interarrival_max)
        if event.time + gap < self.duration:
            self.sim.schedule(event.time + gap, EventKind.TRAFFIC_GENERATION, event.payload)
        self.inject(packet)
