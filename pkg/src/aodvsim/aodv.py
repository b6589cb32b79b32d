"""Per-node AODV: route discovery, sequence-number freshness, forwarding, RERR.

Constants follow RFC 3561 defaults where the protocol description leaves
them open. There is no expanding-ring search, no HELLO messages and no
local repair: link breaks are learned only from failed unicasts.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING

from aodvsim.engine import EventKind, Simulator
from aodvsim.metrics import DataPacket, Outcome, PacketLedger
from aodvsim.radio import BROADCAST, Frame, LinkFailure

if TYPE_CHECKING:
    from aodvsim.radio import Channel

# RFC 3561 message sizes in bits
RREQ_BITS = 24 * 8
RREP_BITS = 20 * 8


def rerr_bits(count: int) -> int:
    return (4 + 8 * count) * 8


@dataclass(frozen=True)
class AodvConfig:
    active_route_timeout: float = 3.0
    rreq_cache_lifetime: float = 3.0
    net_diameter: int = 35
    rreq_retries: int = 2
    retry_wait: float = 1.0
    buffer_cap: int = 64


@dataclass
class RoutingEntry:
    destination: int
    next_hop: int
    hop_count: int
    dest_seq: int
    seq_known: bool = True
    expiry: float = 0.0
    valid: bool = True


@dataclass(frozen=True)
class Rreq:
    originator: int
    originator_seq: int
    rreq_id: int
    destination: int
    dest_seq: int
    dest_seq_unknown: bool
    hop_count: int
    ttl: int


@dataclass(frozen=True)
class Rrep:
    originator: int  # node that started the discovery
    destination: int
    dest_seq: int
    hop_count: int
    lifetime: float


@dataclass(frozen=True)
class Rerr:
    unreachable: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.unreachable:
            raise ValueError("RERR must list at least one unreachable destination")


@dataclass(frozen=True)
class Timer:
    node: int
    purpose: str
    key: int | None = None
    token: int = 0


@dataclass
class Discovery:
    destination: int
    retries_left: int
    attempt: int = 0
    token: int = -1
    buffer: deque = field(default_factory=deque)


def fresh_enough(entry: RoutingEntry, rreq: Rreq) -> bool:
    """May ``entry`` answer ``rreq``? Its seq must be at least the requested one."""
    return (
        entry.valid
        and entry.seq_known
        and (rreq.dest_seq_unknown or entry.dest_seq >= rreq.dest_seq)
    )


def route_improves(existing: RoutingEntry | None, candidate: RoutingEntry) -> bool:
    """Acceptance rule: fresher sequence wins, then strictly fewer hops.

    An invalidated entry is replaced by any candidate that is not older, so
    stored sequence numbers never go backwards.
    """
    if existing is None or not existing.seq_known:
        return True
    if not existing.valid:
        return not candidate.seq_known or candidate.dest_seq >= existing.dest_seq
    if candidate.dest_seq > existing.dest_seq:
        return True
    return candidate.dest_seq == existing.dest_seq and candidate.hop_count < existing.hop_count


class AodvNode:
    is_attacker = False

    def __init__(
        self,
        node_id: int,
        config: AodvConfig,
        sim: Simulator,
        channel: Channel,
        ledger: PacketLedger,
    ):
        self.id = node_id
        self.config = config
        self.sim = sim
        self.channel = channel
        self.ledger = ledger
        self.own_seq = 0
        self.rreq_counter = 0
        self.seen_rreqs: dict[tuple[int, int], float] = {}
        self.routing_table: dict[int, RoutingEntry] = {}
        self.pending: dict[int, Discovery] = {}
        self.rebroadcasts: Counter = Counter()
        self.data_frames_sent = 0
        self._tokens = itertools.count()

    def __repr__(self):
        return f"<{type(self).__name__} {self.id} seq={self.own_seq} routes={len(self.routing_table)}>"

    def start(self) -> None:
        pass

    # routing table

    def _usable(self, entry: RoutingEntry | None) -> bool:
        if entry is None or not entry.valid:
            return False
        if entry.expiry < self.sim.now:
            entry.valid = False
            return False
        return True

    def route_to(self, destination: int) -> RoutingEntry | None:
        entry = self.routing_table.get(destination)
        return entry if self._usable(entry) else None

    def update_route(self, candidate: RoutingEntry) -> bool:
        existing = self.routing_table.get(candidate.destination)
        if existing is not None and existing.valid:
            self._usable(existing)
        if not route_improves(existing, candidate):
            return False
        self.routing_table[candidate.destination] = replace(
            candidate,
            valid=True,
            expiry=self.sim.now + self.config.active_route_timeout,
        )
        return True

    # transmission

    def _broadcast(self, payload, size: float) -> None:
        self.channel.transmit(Frame(self.id, BROADCAST, size, payload), self.sim.now)

    def _unicast(self, recipient: int, payload, size: float) -> None:
        if type(payload) is DataPacket:
            self.data_frames_sent += 1
        self.channel.transmit(Frame(self.id, recipient, size, payload), self.sim.now)

    def receive(self, frame: Frame) -> None:
        payload = frame.payload
        kind = type(payload)
        if kind is DataPacket:
            self.on_data(payload, frame.sender)
        elif kind is Rreq:
            self.handle_rreq(payload, frame.sender)
        elif kind is Rrep:
            self.handle_rrep(payload, frame.sender)
        elif kind is Rerr:
            self.handle_rerr(payload, frame.sender)
        else:
            raise TypeError(f"node {self.id} cannot handle payload {payload!r}")

    # discovery

    def originate_discovery(self, destination: int) -> Rreq:
        cfg = self.config
        discovery = self.pending.get(destination)
        if discovery is None:
            discovery = self.pending[destination] = Discovery(destination, cfg.rreq_retries)
        self.own_seq += 1
        self.rreq_counter += 1
        known = self.routing_table.get(destination)
        seq_known = known is not None and known.seq_known
        rreq = Rreq(
            originator=self.id,
            originator_seq=self.own_seq,
            rreq_id=self.rreq_counter,
            destination=destination,
            dest_seq=known.dest_seq if seq_known else 0,
            dest_seq_unknown=not seq_known,
            hop_count=0,
            ttl=cfg.net_diameter,
        )
        now = self.sim.now
        self.seen_rreqs[(self.id, rreq.rreq_id)] = now + cfg.rreq_cache_lifetime
        discovery.token = next(self._tokens)
        wait = cfg.retry_wait * 2**discovery.attempt
        self.sim.schedule(
            now + wait,
            EventKind.TIMER_EXPIRY,
            Timer(self.id, "discovery", destination, discovery.token),
        )
        self._broadcast(rreq, RREQ_BITS)
        return rreq

    def on_timer(self, timer: Timer) -> None:
        if timer.purpose != "discovery":
            raise ValueError(f"node {self.id} has no timer {timer.purpose!r}")
        discovery = self.pending.get(timer.key)
        if discovery is None or discovery.token != timer.token:
            return
        if discovery.retries_left > 0:
            discovery.retries_left -= 1
            discovery.attempt += 1
            self.originate_discovery(timer.key)
            return
        del self.pending[timer.key]
        for packet in discovery.buffer:
            self.ledger.record(packet, Outcome.DROPPED_NO_ROUTE)

    def handle_rreq(self, rreq: Rreq, previous_hop: int) -> None:
        now = self.sim.now
        key = (rreq.originator, rreq.rreq_id)
        expiry = self.seen_rreqs.get(key)
        if expiry is not None and expiry >= now:
            return
        if len(self.seen_rreqs) > 4096:
            self.seen_rreqs = {k: t for k, t in self.seen_rreqs.items() if t >= now}
        self.seen_rreqs[key] = now + self.config.rreq_cache_lifetime
        if rreq.originator == self.id:
            return
        self.update_route(
            RoutingEntry(rreq.originator, previous_hop, rreq.hop_count + 1, rreq.originator_seq)
        )
        self._answer_rreq(rreq, previous_hop)

    def _answer_rreq(self, rreq: Rreq, previous_hop: int) -> None:
        if rreq.destination == self.id:
            self.own_seq = max(self.own_seq + 1, rreq.dest_seq)
            self._send_rrep(
                Rrep(rreq.originator, self.id, self.own_seq, 0, self.config.active_route_timeout)
            )
            return
        entry = self.route_to(rreq.destination)
        if entry is not None and fresh_enough(entry, rreq):
            self._send_rrep(
                Rrep(
                    rreq.originator,
                    rreq.destination,
                    entry.dest_seq,
                    entry.hop_count,
                    entry.expiry - self.sim.now,
                )
            )
            return
        if rreq.ttl - 1 <= 0:
            return
        self.rebroadcasts[(rreq.originator, rreq.rreq_id)] += 1
        self._broadcast(replace(rreq, hop_count=rreq.hop_count + 1, ttl=rreq.ttl - 1), RREQ_BITS)

    def _send_rrep(self, rrep: Rrep) -> None:
        back = self.route_to(rrep.originator)
        if back is not None:
            self._unicast(back.next_hop, rrep, RREP_BITS)

    def handle_rrep(self, rrep: Rrep, previous_hop: int) -> None:
        if rrep.destination == self.id:
            return
        self.update_route(
            RoutingEntry(rrep.destination, previous_hop, rrep.hop_count + 1, rrep.dest_seq)
        )
        if rrep.originator == self.id:
            discovery = self.pending.pop(rrep.destination, None)
            if discovery is not None:
                for packet in discovery.buffer:
                    self.forward_data(packet)
            return
        # stands in for the IP TTL: forged sequence numbers can close a loop
        # in the reverse path, and an RREP carries no TTL of its own
        if rrep.hop_count + 1 >= self.config.net_diameter:
            return
        self._send_rrep(replace(rrep, hop_count=rrep.hop_count + 1))

    # data

    def on_data(self, packet: DataPacket, previous_hop: int) -> None:
        if packet.destination == self.id:
            self.ledger.record(packet, Outcome.DELIVERED)
        else:
            self.forward_data(packet)

    def forward_data(self, packet: DataPacket) -> None:
        if packet.destination == self.id:
            raise ValueError(f"node {self.id} asked to forward a packet addressed to itself")
        if packet.hops >= self.config.net_diameter:
            # looping through poisoned routes
            self.ledger.record(packet, Outcome.DROPPED_NO_ROUTE)
            return
        entry = self.route_to(packet.destination)
        if entry is not None:
            entry.expiry = max(entry.expiry, self.sim.now + self.config.active_route_timeout)
            self._unicast(entry.next_hop, replace(packet, hops=packet.hops + 1), packet.size)
        elif packet.source == self.id:
            self._buffer(packet)
        else:
            self.ledger.record(packet, Outcome.DROPPED_NO_ROUTE)
            stale = self.routing_table.get(packet.destination)
            self._broadcast(
                Rerr(((packet.destination, stale.dest_seq if stale else 0),)), rerr_bits(1)
            )

    def _buffer(self, packet: DataPacket) -> None:
        discovery = self.pending.get(packet.destination)
        if discovery is None:
            discovery = Discovery(packet.destination, self.config.rreq_retries)
            self.pending[packet.destination] = discovery
            discovery.buffer.append(packet)
            self.originate_discovery(packet.destination)
            return
        discovery.buffer.append(packet)
        if len(discovery.buffer) > self.config.buffer_cap:
            self.ledger.record(discovery.buffer.popleft(), Outcome.DROPPED_BUFFER)

    # route errors

    def on_link_failure(self, failure: LinkFailure) -> None:
        frame = failure.frame
        self.handle_link_break(frame.recipient)
        payload = frame.payload
        if type(payload) is DataPacket:
            if payload.source == self.id:
                self.forward_data(payload)
            else:
                self.ledger.record(payload, Outcome.DROPPED_NO_ROUTE)

    def handle_link_break(self, lost_neighbor: int) -> Rerr | None:
        broken = []
        for destination, entry in self.routing_table.items():
            if entry.next_hop == lost_neighbor and self._usable(entry):
                entry.valid = False
                entry.dest_seq += 1
                broken.append((destination, entry.dest_seq))
        if not broken:
            return None
        rerr = Rerr(tuple(broken))
        self._broadcast(rerr, rerr_bits(len(broken)))
        return rerr

    def handle_rerr(self, rerr: Rerr, sender: int) -> None:
        broken = []
        for destination, seq in rerr.unreachable:
            entry = self.routing_table.get(destination)
            if (
                entry is not None
                and entry.next_hop == sender
                and entry.dest_seq <= seq
                and self._usable(entry)
            ):
                entry.valid = False
                entry.dest_seq = seq
                broken.append((destination, seq))
        if broken:
            self._broadcast(Rerr(tuple(broken)), rerr_bits(len(broken)))
