"""Scenario configuration: flat ``dotted.key = value`` text with ``#`` comments.

Absent keys take the defaults below, the reference scenario: 46 nodes,
600x600 m, 600 s, node 1 -> node 4, Uniform(0.1, 0.11) s inter-arrivals
and Exponential(1024) bit packets.
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from aodvsim.aodv import AodvConfig
from aodvsim.blackhole import AttackerConfig, AttackMode
from aodvsim.metrics import TrafficConfig
from aodvsim.mobility import MobilityConfig, MobilityModel
from aodvsim.radio import RadioConfig


class ConfigError(ValueError):
    """Carries every problem found, not just the first."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.errors))


@dataclass(frozen=True)
class ScenarioConfig:
    node_count: int = 46
    arena_width: float = 600.0
    arena_height: float = 600.0
    duration: float = 600.0
    radio: RadioConfig = field(default_factory=RadioConfig)
    mobility: MobilityConfig = field(default_factory=MobilityConfig)
    aodv: AodvConfig = field(default_factory=AodvConfig)
    attackers: AttackerConfig = field(default_factory=AttackerConfig)
    traffic: TrafficConfig = field(default_factory=TrafficConfig)
    positions: tuple[tuple[int, tuple[float, float]], ...] = ()
    seeds: tuple[int, ...] = (1,)
    sweep_attackers: tuple[int, ...] = ()
    sweep_speeds: tuple[float, ...] = ()

    @property
    def pins(self) -> dict[int, tuple[float, float]]:
        return dict(self.positions)

    def endpoints(self) -> set[int]:
        return {n for flow in self.traffic.flows for n in flow}


# value codecs


def _split(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in _split(text))


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in _split(text))


def _fmt_list(values) -> str:
    return ", ".join(_fmt_scalar(v) for v in values)


def _fmt_scalar(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "value"):
        return value.value
    return str(value)


def _flows(text: str) -> tuple[tuple[int, int], ...]:
    flows = []
    for part in _split(text):
        src, sep, dst = part.partition("->")
        if not sep:
            raise ValueError(f"flow {part!r} must look like 'src->dst'")
        flows.append((int(src), int(dst)))
    return tuple(flows)


def _fmt_flows(flows) -> str:
    return ", ".join(f"{s}->{d}" for s, d in flows)


def _point(text: str) -> tuple[float, float]:
    values = _float_list(text)
    if len(values) != 2:
        raise ValueError(f"position needs 'x, y', got {text!r}")
    return values


def _optional_float(text: str) -> float | None:
    return None if text.lower() in ("", "none") else float(text)


def _optional_ints(text: str) -> tuple[int, ...] | None:
    return None if text.lower() in ("", "none") else _int_list(text)


@dataclass(frozen=True)
class _Key:
    name: str
    section: str | None
    attr: str
    parse: Callable[[str], Any]
    fmt: Callable[[Any], str] = _fmt_scalar


_KEYS = [
    _Key("node_count", None, "node_count", int),
    _Key("arena.width", None, "arena_width", float),
    _Key("arena.height", None, "arena_height", float),
    _Key("duration", None, "duration", float),
    _Key("seeds", None, "seeds", _int_list, _fmt_list),
    _Key("radio.tx_power_w", "radio", "tx_power_w", float),
    _Key("radio.rx_threshold_dbm", "radio", "rx_threshold_dbm", float),
    _Key("radio.frequency_hz", "radio", "frequency_hz", float),
    _Key("radio.bitrate_bps", "radio", "bitrate_bps", float),
    _Key("radio.range_override_m", "radio", "range_override_m", _optional_float),
    _Key("mobility.model", "mobility", "model", MobilityModel),
    _Key("mobility.v_min", "mobility", "v_min", float),
    _Key("mobility.v_max", "mobility", "v_max", float),
    _Key("mobility.pause", "mobility", "pause", float),
    _Key("aodv.active_route_timeout", "aodv", "active_route_timeout", float),
    _Key("aodv.rreq_cache_lifetime", "aodv", "rreq_cache_lifetime", float),
    _Key("aodv.net_diameter", "aodv", "net_diameter", int),
    _Key("aodv.rreq_retries", "aodv", "rreq_retries", int),
    _Key("aodv.retry_wait", "aodv", "retry_wait", float),
    _Key("aodv.buffer_cap", "aodv", "buffer_cap", int),
    _Key("attackers.count", "attackers", "count", int),
    _Key("attackers.mode", "attackers", "mode", AttackMode),
    _Key("attackers.seq_inflation", "attackers", "seq_inflation", int),
    _Key("attackers.hop_count", "attackers", "advertised_hop_count", int),
    _Key("attackers.fake_rreq_period", "attackers", "fake_rreq_period", float),
    _Key("attackers.node_ids", "attackers", "node_ids", _optional_ints, _fmt_list),
    _Key("traffic.flows", "traffic", "flows", _flows, _fmt_flows),
    _Key("traffic.start", "traffic", "start", float),
    _Key("traffic.interarrival_min", "traffic", "interarrival_min", float),
    _Key("traffic.interarrival_max", "traffic", "interarrival_max", float),
    _Key("traffic.size_mean_bits", "traffic", "size_mean_bits", float),
    _Key("sweep.attackers", None, "sweep_attackers", _int_list, _fmt_list),
    _Key("sweep.speeds", None, "sweep_speeds", _float_list, _fmt_list),
]
_BY_NAME = {k.name: k for k in _KEYS}
_PIN = re.compile(r"node\.(\d+)\.position$")


def parse_text(text: str) -> ScenarioConfig:
    errors: list[str] = []
    top: dict[str, Any] = {}
    sections: dict[str, dict[str, Any]] = {}
    pins: dict[int, tuple[float, float]] = {}
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, value = line.partition("=")
        name, value = name.strip(), value.strip()
        if not sep or not name:
            errors.append(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
            continue
        if name in seen:
            errors.append(f"line {lineno}: {name}: duplicate key")
            continue
        seen.add(name)
        pin = _PIN.match(name)
        if pin:
            try:
                pins[int(pin.group(1))] = _point(value)
            except ValueError as exc:
                errors.append(f"line {lineno}: {name}: {exc}")
            continue
        key = _BY_NAME.get(name)
        if key is None:
            errors.append(f"line {lineno}: {name}: unknown key")
            continue
        try:
            parsed = key.parse(value)
        except ValueError as exc:
            errors.append(f"line {lineno}: {name}: {exc}")
            continue
        if key.section is None:
            top[key.attr] = parsed
        else:
            sections.setdefault(key.section, {})[key.attr] = parsed
    base = ScenarioConfig()
    for section, values in sections.items():
        top[section] = dataclasses.replace(getattr(base, section), **values)
    if pins:
        top["positions"] = tuple(sorted(pins.items()))
    config = dataclasses.replace(base, **top)
    # validate whatever did parse so one pass reports everything
    errors.extend(validate(config))
    if errors:
        raise ConfigError(errors)
    return config


def parse_config(path) -> ScenarioConfig:
    return parse_text(Path(path).read_text())


def dump_config(config: ScenarioConfig) -> str:
    """Render every effective setting; ``parse_text`` inverts it exactly."""
    lines = []
    for key in _KEYS:
        holder = config if key.section is None else getattr(config, key.section)
        value = getattr(holder, key.attr)
        if value is None or (key.attr.startswith("sweep_") and not value):
            continue
        lines.append(f"{key.name} = {key.fmt(value)}")
    for node, (x, y) in config.positions:
        lines.append(f"node.{node}.position = {x!r}, {y!r}")
    return "\n".join(lines) + "\n"


def validate(config: ScenarioConfig) -> list[str]:
    errors = []

    def check(ok: bool, key: str, message: str) -> None:
        if not ok:
            errors.append(f"{key}: {message}")

    n = config.node_count
    check(n >= 2, "node_count", f"need at least 2 nodes, got {n}")
    check(config.arena_width > 0, "arena.width", "must be positive")
    check(config.arena_height > 0, "arena.height", "must be positive")
    check(config.duration > 0, "duration", "must be positive")
    check(len(config.seeds) > 0, "seeds", "need at least one seed")
    for seed in config.seeds:
        check(0 <= seed < 2**64, "seeds", f"seed {seed} is not a 64-bit unsigned integer")

    radio = config.radio
    check(radio.tx_power_w > 0, "radio.tx_power_w", "must be positive")
    check(radio.frequency_hz > 0, "radio.frequency_hz", "must be positive")
    check(radio.bitrate_bps > 0, "radio.bitrate_bps", "must be positive")
    if radio.range_override_m is not None:
        check(radio.range_override_m > 0, "radio.range_override_m", "must be positive")

    mob = config.mobility
    if mob.model is MobilityModel.RANDOM_WAYPOINT:
        check(mob.v_min > 0, "mobility.v_min", "random waypoint needs v_min > 0")
        check(mob.v_min <= mob.v_max, "mobility.v_max", f"v_min {mob.v_min} exceeds v_max {mob.v_max}")
    check(mob.pause >= 0, "mobility.pause", "must be non-negative")

    aodv = config.aodv
    check(aodv.active_route_timeout > 0, "aodv.active_route_timeout", "must be positive")
    check(aodv.rreq_cache_lifetime > 0, "aodv.rreq_cache_lifetime", "must be positive")
    check(aodv.net_diameter >= 1, "aodv.net_diameter", "must be at least 1")
    check(aodv.rreq_retries >= 0, "aodv.rreq_retries", "must be non-negative")
    check(aodv.retry_wait > 0, "aodv.retry_wait", "must be positive")
    check(aodv.buffer_cap >= 1, "aodv.buffer_cap", "must be at least 1")

    traffic = config.traffic
    endpoints = config.endpoints()
    for src, dst in traffic.flows:
        check(src != dst, "traffic.flows", f"flow {src}->{dst} has the same source and destination")
        for node in (src, dst):
            check(1 <= node <= n, "traffic.flows", f"node {node} is outside 1..{n}")
    check(traffic.start >= 0, "traffic.start", "must be non-negative")
    check(
        traffic.interarrival_min < traffic.interarrival_max,
        "traffic.interarrival_max",
        "must exceed traffic.interarrival_min",
    )
    check(traffic.interarrival_min > 0, "traffic.interarrival_min", "must be positive")
    check(traffic.size_mean_bits > 0, "traffic.size_mean_bits", "must be positive")

    att = config.attackers
    available = n - len(endpoints & set(range(1, n + 1)))
    check(att.count >= 0, "attackers.count", "must be non-negative")
    check(att.seq_inflation >= 1, "attackers.seq_inflation", "must be at least 1")
    check(att.advertised_hop_count >= 0, "attackers.hop_count", "must be non-negative")
    check(att.fake_rreq_period > 0, "attackers.fake_rreq_period", "must be positive")
    if att.node_ids is not None:
        available = len(att.node_ids)
        check(len(set(att.node_ids)) == len(att.node_ids), "attackers.node_ids", "duplicate ids")
        for node in att.node_ids:
            check(1 <= node <= n, "attackers.node_ids", f"node {node} is outside 1..{n}")
            check(node not in endpoints, "attackers.node_ids", f"node {node} is a traffic endpoint")
    check(att.count <= available, "attackers.count",
          f"cannot place {att.count} attackers, only {available} eligible nodes")
    for count in config.sweep_attackers:
        check(0 <= count <= available, "sweep.attackers",
              f"cannot place {count} attackers, only {available} eligible nodes")
    for speed in config.sweep_speeds:
        check(speed >= 0, "sweep.speeds", f"speed {speed} is negative")

    for node, (x, y) in config.positions:
        key = f"node.{node}.position"
        check(1 <= node <= n, key, f"node {node} is outside 1..{n}")
        check(0 <= x <= config.arena_width and 0 <= y <= config.arena_height, key,
              f"({x}, {y}) lies outside the {config.arena_width}x{config.arena_height} arena")
    return errors
