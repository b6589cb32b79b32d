from __future__ import annotations

import pytest

from aodvsim.blackhole import AttackerConfig, AttackMode
from aodvsim.config import ScenarioConfig
from aodvsim.metrics import TrafficConfig
from aodvsim.mobility import MobilityConfig, MobilityModel
from aodvsim.radio import RadioConfig
from aodvsim.simulation import Network


def static_config(
    positions,
    flows=((1, 2),),
    range_m=100.0,
    duration=10.0,
    attackers=(),
    mode=AttackMode.FAKE_RREP,
    arena=600.0,
    **attack,
) -> ScenarioConfig:
    """Static scenario with every node pinned and a fixed radio range."""
    return ScenarioConfig(
        node_count=len(positions),
        arena_width=arena,
        arena_height=arena,
        duration=duration,
        radio=RadioConfig(range_override_m=range_m),
        mobility=MobilityConfig(model=MobilityModel.STATIC),
        traffic=TrafficConfig(flows=tuple(flows)),
        positions=tuple((i + 1, tuple(p)) for i, p in enumerate(positions)),
        attackers=AttackerConfig(
            count=len(attackers),
            node_ids=tuple(attackers) if attackers else None,
            mode=mode,
            **attack,
        ),
    )


def line(n: int, spacing: float = 80.0):
    return [(10.0 + spacing * i, 300.0) for i in range(n)]


def static_network(positions, seed=1, **kw) -> Network:
    return Network(static_config(positions, **kw), seed)


@pytest.fixture
def idle_line():
    """Four nodes in a line 1-2-3-4 (80 m apart, 100 m range), no traffic yet."""
    net = static_network(line(4), flows=())
    return net


CRITERIA = {
    1: "three-node capture",
    2: "shortest-path oracle",
    3: "ordinal PDR degradation",
    4: "packet conservation",
    5: "determinism",
    6: "attack construction",
    7: "freshness rule",
}


def pytest_terminal_summary(terminalreporter):
    outcomes: dict[int, list[str]] = {}
    for status in ("passed", "failed", "error", "skipped"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid:
                continue
            number = int(nodeid.split("test_criterion_")[1].split("_")[0])
            outcomes.setdefault(number, []).append(status)
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number, name in CRITERIA.items():
        seen = outcomes.get(number)
        if not seen:
            verdict = "NOT RUN"
        elif all(s == "passed" for s in seen):
            verdict = "PASS"
        else:
            verdict = "FAIL"
        terminalreporter.write_line(f"criterion {number} ({name}): {verdict}")
