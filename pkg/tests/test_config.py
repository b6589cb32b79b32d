import dataclasses
import math

import pytest
from hypothesis import given, settings, strategies as st

from aodvsim.blackhole import AttackerConfig, AttackMode
from aodvsim.config import ConfigError, ScenarioConfig, dump_config, parse_config, parse_text, validate
from aodvsim.metrics import TrafficConfig
from aodvsim.mobility import MobilityConfig, MobilityModel


def errors_of(text):
    with pytest.raises(ConfigError) as info:
        parse_text(text)
    return info.value.errors


def test_empty_file_gives_reference_defaults():
    cfg = parse_text("# nothing but a comment\n\n")
    assert cfg == ScenarioConfig()
    assert (cfg.node_count, cfg.arena_width, cfg.arena_height, cfg.duration) == (46, 600.0, 600.0, 600.0)
    assert cfg.traffic.flows == ((1, 4),)
    assert (cfg.traffic.interarrival_min, cfg.traffic.interarrival_max) == (0.1, 0.11)
    assert cfg.traffic.size_mean_bits == 1024.0
    assert (cfg.radio.tx_power_w, cfg.radio.rx_threshold_dbm) == (1e-4, -95.0)
    assert (cfg.radio.frequency_hz, cfg.radio.bitrate_bps) == (2.4e9, 1e6)
    assert cfg.aodv.active_route_timeout == 3.0


def test_values_and_pins_are_read():
    cfg = parse_text(
        """
        node_count = 5   # small
        traffic.flows = 1->3, 2->4
        mobility.model = static
        attackers.count = 1
        attackers.mode = both
        node.2.position = 10, 20.5
        seeds = 3, 4
        sweep.speeds = 0, 2.5
        """
    )
    assert cfg.node_count == 5
    assert cfg.traffic.flows == ((1, 3), (2, 4))
    assert cfg.mobility.model is MobilityModel.STATIC
    assert cfg.attackers == AttackerConfig(count=1, mode=AttackMode.BOTH)
    assert cfg.pins == {2: (10.0, 20.5)}
    assert cfg.seeds == (3, 4) and cfg.sweep_speeds == (0.0, 2.5)


def test_parse_config_reads_a_file(tmp_path):
    path = tmp_path / "s.conf"
    path.write_text("duration = 12.5\n")
    assert parse_config(path).duration == 12.5


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("node_count = 1", "node_count"),
        ("attackers.node_ids = 1\nattackers.count = 1", "traffic endpoint"),
        ("attackers.node_ids = 4", "traffic endpoint"),
        ("traffic.flows = 2->2", "same source"),
        ("traffic.flows = 1->99", "outside"),
        ("colour = blue", "unknown key"),
        ("duration = 1\nduration = 2", "duplicate"),
        ("duration = soon", "duration"),
        ("mobility.model = teleport", "mobility.model"),
        ("just some words", "expected 'key = value'"),
        ("node.3.position = 700, 10", "outside"),
        ("node.3.position = 1", "position"),
        ("mobility.v_min = 6\nmobility.v_max = 5", "exceeds"),
        ("traffic.interarrival_min = 0.2", "interarrival"),
        ("attackers.count = 45", "cannot place"),
        ("sweep.attackers = 0, 50", "sweep.attackers"),
        ("sweep.speeds = -1", "negative"),
        ("seeds = -3", "64-bit"),
    ],
)
def test_rejections_name_the_problem(text, fragment):
    errors = errors_of(text)
    assert any(fragment in e for e in errors), errors


def test_every_error_is_reported_at_once():
    errors = errors_of("colour = blue\nduration = soon\nnode_count = 1\nmobility.v_min = 9\n")
    assert len(errors) >= 4
    joined = "\n".join(errors)
    for fragment in ("colour", "duration", "node_count", "v_max"):
        assert fragment in joined


def test_validate_accepts_defaults():
    assert validate(ScenarioConfig()) == []


finite = st.floats(min_value=0.001, max_value=1e6, allow_nan=False, allow_infinity=False)


@st.composite
def scenarios(draw):
    n = draw(st.integers(min_value=8, max_value=60))
    width = draw(st.floats(min_value=10.0, max_value=5000.0))
    height = draw(st.floats(min_value=10.0, max_value=5000.0))
    v_min = draw(st.floats(min_value=0.01, max_value=20.0))
    v_max = v_min + draw(st.floats(min_value=0.0, max_value=20.0))
    lo = draw(st.floats(min_value=0.001, max_value=1.0))
    hi = lo + draw(st.floats(min_value=0.001, max_value=1.0))
    pinned = draw(st.lists(st.integers(min_value=1, max_value=n), max_size=4, unique=True))
    positions = tuple(
        (node, (draw(st.floats(min_value=0.0, max_value=width)), draw(st.floats(min_value=0.0, max_value=height))))
        for node in sorted(pinned)
    )
    return ScenarioConfig(
        node_count=n,
        arena_width=width,
        arena_height=height,
        duration=draw(finite),
        mobility=MobilityConfig(
            model=draw(st.sampled_from(MobilityModel)), v_min=v_min, v_max=v_max,
            pause=draw(st.floats(min_value=0.0, max_value=100.0)),
        ),
        attackers=AttackerConfig(
            count=draw(st.integers(min_value=0, max_value=3)),
            mode=draw(st.sampled_from(AttackMode)),
            seq_inflation=draw(st.integers(min_value=1, max_value=10**6)),
            fake_rreq_period=draw(finite),
        ),
        traffic=TrafficConfig(
            flows=((1, n), (2, 3)), start=draw(st.floats(min_value=0.0, max_value=100.0)),
            interarrival_min=lo, interarrival_max=hi, size_mean_bits=draw(finite),
        ),
        positions=positions,
        seeds=tuple(draw(st.lists(st.integers(min_value=0, max_value=2**64 - 1), min_size=1, max_size=4))),
        sweep_attackers=tuple(draw(st.lists(st.integers(min_value=0, max_value=3), max_size=3))),
        sweep_speeds=tuple(draw(st.lists(st.floats(min_value=0.0, max_value=30.0), max_size=3))),
    )


@settings(max_examples=150, deadline=None)
@given(scenarios())
def test_dump_then_parse_is_identity(cfg):
    assert validate(cfg) == []
    text = dump_config(cfg)
    assert parse_text(text) == cfg
    assert dump_config(parse_text(text)) == text


def test_dump_keeps_optional_override():
    cfg = dataclasses.replace(
        ScenarioConfig(), radio=dataclasses.replace(ScenarioConfig().radio, range_override_m=math.pi)
    )
    assert "radio.range_override_m = 3.141592653589793" in dump_config(cfg)
    assert parse_text(dump_config(cfg)) == cfg
