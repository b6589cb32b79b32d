"""Three static nodes in a line, S - M - D.

With M honest every packet gets through. Turn M into a black hole and the
source's route to D points at M after the first discovery, so nearly every
packet is absorbed there.
"""

from __future__ import annotations

from aodvsim import AttackerConfig, MobilityConfig, Network, RadioConfig, ScenarioConfig, TrafficConfig
from aodvsim.mobility import MobilityModel


def scenario(attacker: bool) -> ScenarioConfig:
    return ScenarioConfig(
        node_count=3,
        duration=60.0,
        radio=RadioConfig(range_override_m=100.0),
        mobility=MobilityConfig(model=MobilityModel.STATIC),
        traffic=TrafficConfig(flows=((1, 3),)),
        positions=((1, (10.0, 300.0)), (2, (90.0, 300.0)), (3, (170.0, 300.0))),
        attackers=AttackerConfig(count=1, node_ids=(2,)) if attacker else AttackerConfig(),
    )


for attacker in (False, True):
    net = Network(scenario(attacker), seed=1)
    m = net.run()
    route = net.nodes[1].routing_table[3]
    label = "black hole" if attacker else "honest"
    print(f"M {label:10s} sent={m.sent} delivered={m.delivered} "
          f"absorbed={m.dropped_by_attacker} pdr={m.pdr:.4f}")
    print(f"  source route to D: next_hop={route.next_hop} hops={route.hop_count} seq={route.dest_seq}")
    print(f"  D's own sequence number: {net.nodes[3].own_seq}")
