"""Black-hole adversaries: forged RREPs, forged RREQs and silent data drops."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from aodvsim.aodv import RREP_BITS, RREQ_BITS, AodvNode, Rrep, Rreq, Timer
from aodvsim.engine import EventKind
from aodvsim.metrics import DataPacket, Outcome
from aodvsim.radio import BROADCAST, Frame

# keeps forged request ids clear of any id an honest originator will reach
FORGED_RREQ_ID_BASE = 1 << 32


class AttackMode(enum.Enum):
    FAKE_RREP = "fake_rrep"
    FAKE_RREQ = "fake_rreq"
    BOTH = "both"


@dataclass(frozen=True)
class AttackerConfig:
    count: int = 0
    mode: AttackMode = AttackMode.FAKE_RREP
    seq_inflation: int = 100
    advertised_hop_count: int = 0
    fake_rreq_period: float = 10.0
    node_ids: tuple[int, ...] | None = None


def craft_fake_rrep(
    attacker: int,
    rreq: Rreq,
    previous_hop: int,
    config: AttackerConfig,
    lifetime: float = 3.0,
) -> Frame:
    """Answer ``rreq`` with a route that claims to be fresher than the real one.

    The reply keeps the request's originator and destination, is sent from
    the attacker's own id, and goes straight back to the neighbour the
    request arrived from.
    """
    base = 0 if rreq.dest_seq_unknown else rreq.dest_seq
    rrep = Rrep(
        originator=rreq.originator,
        destination=rreq.destination,
        dest_seq=base + config.seq_inflation,
        hop_count=config.advertised_hop_count,
        lifetime=lifetime,
    )
    return Frame(sender=attacker, recipient=previous_hop, size=RREP_BITS, payload=rrep)


def craft_fake_rreq(
    attacker: int,
    victim_src: int,
    victim_dst: int,
    victim_seq: int,
    rreq_id: int,
    config: AttackerConfig,
    ttl: int = 35,
) -> Frame:
    """Broadcast a request impersonating ``victim_src``.

    Receivers install a reverse route to the victim through the attacker,
    carrying ``victim_seq + seq_inflation`` and a short hop count.
    """
    rreq = Rreq(
        originator=victim_src,
        originator_seq=victim_seq + config.seq_inflation,
        rreq_id=rreq_id,
        destination=victim_dst,
        dest_seq=0,
        dest_seq_unknown=True,
        hop_count=config.advertised_hop_count,
        ttl=ttl,
    )
    return Frame(sender=attacker, recipient=BROADCAST, size=RREQ_BITS, payload=rreq)


class BlackholeNode(AodvNode):
    """Honest AODV node except that it forges routes and swallows transit data."""

    is_attacker = True

    def __init__(
        self,
        *args,
        attack: AttackerConfig,
        victims: tuple[int, int] | None = None,
        horizon: float = float("inf"),
        **kwargs,
    ):
        super().__init__(*args, **kwargs)
        self.attack = attack
        self.victims = victims
        self.horizon = horizon
        self.forged_rreps = 0
        self.forged_rreqs = 0
        self.absorbed = 0

    def start(self) -> None:
        if self.attack.mode in (AttackMode.FAKE_RREQ, AttackMode.BOTH) and self.victims:
            if self.sim.now < self.horizon:
                self.sim.schedule(self.sim.now, EventKind.TIMER_EXPIRY, Timer(self.id, "forge"))

    def on_timer(self, timer: Timer) -> None:
        if timer.purpose != "forge":
            super().on_timer(timer)
            return
        self.send_fake_rreq()
        later = self.sim.now + self.attack.fake_rreq_period
        if later < self.horizon:
            self.sim.schedule(later, EventKind.TIMER_EXPIRY, timer)

    def send_fake_rreq(self) -> Frame:
        victim_src, victim_dst = self.victims
        known = self.routing_table.get(victim_src)
        victim_seq = known.dest_seq if known is not None else 0
        rreq_id = FORGED_RREQ_ID_BASE + (self.id << 20) + self.forged_rreqs
        frame = craft_fake_rreq(
            self.id, victim_src, victim_dst, victim_seq, rreq_id, self.attack,
            ttl=self.config.net_diameter,
        )
        self.forged_rreqs += 1
        self.seen_rreqs[(victim_src, rreq_id)] = self.sim.now + self.config.rreq_cache_lifetime
        self.channel.transmit(frame, self.sim.now)
        return frame

    def _answer_rreq(self, rreq: Rreq, previous_hop: int) -> None:
        if self.attack.mode is AttackMode.FAKE_RREQ or rreq.destination == self.id:
            super()._answer_rreq(rreq, previous_hop)
            return
        frame = craft_fake_rrep(
            self.id, rreq, previous_hop, self.attack, self.config.active_route_timeout
        )
        self.forged_rreps += 1
        self.channel.transmit(frame, self.sim.now)

    def on_data(self, packet: DataPacket, previous_hop: int) -> None:
        if packet.destination == self.id:
            super().on_data(packet, previous_hop)
        else:
            self.attacker_on_data(packet)

    def attacker_on_data(self, packet: DataPacket) -> None:
        self.absorbed += 1
        self.ledger.record(packet, Outcome.DROPPED_BY_ATTACKER)
