"""Discrete-event MANET simulator running AODV with black-hole adversaries."""

from aodvsim.aodv import AodvConfig, AodvNode, RoutingEntry, Rerr, Rrep, Rreq, fresh_enough
from aodvsim.blackhole import (
    AttackerConfig,
    AttackMode,
    BlackholeNode,
    craft_fake_rrep,
    craft_fake_rreq,
)
from aodvsim.config import ConfigError, ScenarioConfig, dump_config, parse_config, parse_text
from aodvsim.engine import Event, EventKind, RandomStream, Simulator, StreamId
from aodvsim.experiment import ExperimentResult, emit_results, run_experiment
from aodvsim.metrics import DataPacket, RunMetrics, TrafficConfig, aggregate, compute_pdr
from aodvsim.mobility import MobilityConfig, Position
from aodvsim.radio import BROADCAST, Frame, RadioConfig, compute_range
from aodvsim.simulation import Network, run

__all__ = [
    "AodvConfig",
    "AodvNode",
    "AttackMode",
    "AttackerConfig",
    "BROADCAST",
    "BlackholeNode",
    "ConfigError",
    "DataPacket",
    "Event",
    "EventKind",
    "ExperimentResult",
    "Frame",
    "MobilityConfig",
    "Network",
    "Position",
    "RadioConfig",
    "RandomStream",
    "Rerr",
    "Rrep",
    "Rreq",
    "RoutingEntry",
    "RunMetrics",
    "ScenarioConfig",
    "Simulator",
    "StreamId",
    "TrafficConfig",
    "aggregate",
    "compute_pdr",
    "compute_range",
    "craft_fake_rrep",
    "craft_fake_rreq",
    "dump_config",
    "emit_results",
    "fresh_enough",
    "parse_config",
    "parse_text",
    "run",
    "run_experiment",
]

__version__ = "0.1.0"
