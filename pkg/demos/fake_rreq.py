"""The forged-request variant: an attacker impersonates the source.

Node 5 periodically floods a request claiming to come from node 1 with an
inflated sequence number. Every node that hears it points its route back to
node 1 at the attacker, so replies and data headed for node 1 vanish.
"""

from __future__ import annotations

from aodvsim import AttackerConfig, AttackMode, MobilityConfig, Network, RadioConfig, ScenarioConfig, TrafficConfig
from aodvsim.mobility import MobilityModel

# 1 - 2 - 3 - 4 along a line, attacker 5 sits next to 3 and 4
positions = ((1, (10.0, 300.0)), (2, (90.0, 300.0)), (3, (170.0, 300.0)),
             (4, (250.0, 300.0)), (5, (210.0, 360.0)))

cfg = ScenarioConfig(
    node_count=5,
    duration=30.0,
    radio=RadioConfig(range_override_m=100.0),
    mobility=MobilityConfig(model=MobilityModel.STATIC),
    # node 4 talks back to node 1; the forged requests name 1 as originator
    traffic=TrafficConfig(flows=((1, 4), (4, 1))),
    positions=positions,
    attackers=AttackerConfig(count=1, node_ids=(5,), mode=AttackMode.FAKE_RREQ),
)

net = Network(cfg, seed=1)
m = net.run()
print(f"forged requests sent: {net.nodes[5].forged_rreqs}")
for node in (2, 3, 4):
    entry = net.nodes[node].routing_table.get(1)
    if entry is not None:
        print(f"node {node} route to 1: next_hop={entry.next_hop} seq={entry.dest_seq} valid={entry.valid}")
print(f"node 1 own sequence number: {net.nodes[1].own_seq}")
print(f"sent={m.sent} delivered={m.delivered} absorbed={m.dropped_by_attacker} "
      f"no_route={m.dropped_no_route} pdr={m.pdr:.4f}")
