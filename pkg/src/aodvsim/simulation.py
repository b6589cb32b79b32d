"""Assemble a whole network for one seed and run it to the horizon."""

from __future__ import annotations

from typing import TextIO

from aodvsim.aodv import AodvNode, Rerr, Rrep, Rreq, Timer
from aodvsim.blackhole import AttackerConfig, BlackholeNode
from aodvsim.config import ScenarioConfig
from aodvsim.engine import Event, EventKind, RandomStream, SimulationError, Simulator, StreamId, make_streams
from aodvsim.metrics import DataPacket, PacketLedger, RunMetrics, TrafficGenerator
from aodvsim.mobility import Mobility
from aodvsim.radio import BROADCAST, Channel, Delivery, LinkFailure


class ConservationError(SimulationError):
    pass


def choose_attackers(config: ScenarioConfig, stream: RandomStream) -> list[int]:
    """Attacker ids for ``config.attackers.count``.

    A full permutation of the eligible nodes is always drawn and its prefix
    taken, so the attacker set for k is contained in the set for k + 1 under
    the same seed.
    """
    att: AttackerConfig = config.attackers
    if att.node_ids is not None:
        return sorted(att.node_ids[: att.count])
    endpoints = config.endpoints()
    eligible = [n for n in range(1, config.node_count + 1) if n not in endpoints]
    order = stream.generator.permutation(len(eligible))
    return sorted(eligible[i] for i in order[: att.count])


def describe(payload) -> str:
    kind = type(payload)
    if kind is DataPacket:
        return f"DATA id={payload.id} {payload.source}->{payload.destination} bits={payload.size}"
    if kind is Rreq:
        flag = "?" if payload.dest_seq_unknown else ""
        return (
            f"RREQ orig={payload.originator}/{payload.originator_seq} id={payload.rreq_id} "
            f"dst={payload.destination}/{payload.dest_seq}{flag} hops={payload.hop_count} ttl={payload.ttl}"
        )
    if kind is Rrep:
        return (
            f"RREP orig={payload.originator} dst={payload.destination}/{payload.dest_seq} "
            f"hops={payload.hop_count}"
        )
    if kind is Rerr:
        return "RERR " + " ".join(f"{d}/{s}" for d, s in payload.unreachable)
    return repr(payload)


def summarize(event: Event) -> str:
    p = event.payload
    if event.kind is EventKind.FRAME_DELIVERY:
        cast = "*" if p.frame.recipient == BROADCAST else ""
        return f"{p.frame.sender}->{p.receiver}{cast} {describe(p.frame.payload)}"
    if event.kind is EventKind.TIMER_EXPIRY:
        return f"node={p.node} {p.purpose} key={p.key} token={p.token}"
    if event.kind is EventKind.TRAFFIC_GENERATION:
        return f"flow={p}"
    if event.kind is EventKind.WAYPOINT_ARRIVAL:
        return f"node={p}"
    return ""


def trace_line(event: Event) -> str:
    return f"{event.time!r}\t{event.seq}\t{event.kind.value}\t{summarize(event)}\n"


class Network:
    def __init__(self, config: ScenarioConfig, seed: int, trace: TextIO | None = None):
        self.config = config
        self.seed = seed
        self._trace_out = trace
        self.sim = Simulator(trace=self._trace if trace is not None else None)
        streams = make_streams(seed)
        self.streams = streams
        self.mobility = Mobility(
            config.node_count,
            config.arena_width,
            config.arena_height,
            config.mobility,
            streams[StreamId.MOBILITY],
            self.sim,
            config.pins,
        )
        self.channel = Channel(config.radio, self.mobility, self.sim, self._link_failure)
        self.ledger = PacketLedger()
        self.attacker_ids = choose_attackers(config, streams[StreamId.ATTACKER_CHOICE])
        victims = config.traffic.flows[0] if config.traffic.flows else None
        self.nodes: dict[int, AodvNode] = {}
        for node_id in range(1, config.node_count + 1):
            args = (node_id, config.aodv, self.sim, self.channel, self.ledger)
            if node_id in self.attacker_ids:
                self.nodes[node_id] = BlackholeNode(
                    *args, attack=config.attackers, victims=victims, horizon=config.duration
                )
            else:
                self.nodes[node_id] = AodvNode(*args)
        self.traffic = TrafficGenerator(
            config.traffic,
            config.duration,
            self.sim,
            streams[StreamId.TRAFFIC],
            streams[StreamId.PACKET_SIZE],
            self.ledger,
            self._inject,
        )
        self.sim.on(EventKind.FRAME_DELIVERY, self._deliver)
        self.sim.on(EventKind.TIMER_EXPIRY, self._timer)
        self.sim.on(EventKind.SIMULATION_END, lambda event: self.sim.stop())
        self.metrics: RunMetrics | None = None

    def _trace(self, event: Event) -> None:
        self._trace_out.write(trace_line(event))

    def _deliver(self, event: Event) -> None:
        delivery: Delivery = event.payload
        self.nodes[delivery.receiver].receive(delivery.frame)

    def _timer(self, event: Event) -> None:
        timer: Timer = event.payload
        self.nodes[timer.node].on_timer(timer)

    def _link_failure(self, failure: LinkFailure) -> None:
        self.nodes[failure.frame.sender].on_link_failure(failure)

    def _inject(self, packet: DataPacket) -> None:
        self.nodes[packet.source].forward_data(packet)

    def run(self) -> RunMetrics:
        self.mobility.start()
        for node in self.nodes.values():
            node.start()
        self.traffic.start()
        if len(self.sim):
            self.sim.schedule(self.config.duration, EventKind.SIMULATION_END)
        self.sim.run(until=self.config.duration)
        metrics = self.ledger.metrics(self.sim.now)
        if not metrics.conserved():
            raise ConservationError(f"packet conservation violated (seed {self.seed}): {metrics}")
        self.metrics = metrics
        return metrics

    def routing_table_rows(self) -> list[tuple]:
        rows = []
        for node_id, node in self.nodes.items():
            for dest in sorted(node.routing_table):
                e = node.routing_table[dest]
                rows.append((node_id, dest, e.next_hop, e.hop_count, e.dest_seq, int(e.valid)))
        return rows


def run(config: ScenarioConfig, seed: int | None = None, trace: TextIO | None = None) -> RunMetrics:
    """Simulate one seed (default: the first configured seed)."""
    if seed is None:
        seed = config.seeds[0]
    return Network(config, seed, trace).run()
