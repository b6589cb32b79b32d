"""Free-space range from the radio settings, and the disk graph it induces."""

from __future__ import annotations

from aodvsim import RadioConfig, ScenarioConfig, compute_range
from aodvsim.simulation import Network

cfg = ScenarioConfig()
r = compute_range(cfg.radio)
print(f"tx {cfg.radio.tx_power_w} W, threshold {cfg.radio.rx_threshold_dbm} dBm, "
      f"{cfg.radio.frequency_hz / 1e9:g} GHz -> range {r:.2f} m")

# quadrupling the power doubles the free-space range
print(f"4x power -> {compute_range(RadioConfig(tx_power_w=4 * cfg.radio.tx_power_w)):.2f} m")

# snapshot of the default random-waypoint network at a few instants
net = Network(cfg, seed=1)
net.mobility.start()
for t in (0.0, 100.0, 300.0):
    degrees = [len(net.channel.neighbors(n, t)) for n in range(1, cfg.node_count + 1)]
    print(f"t={t:5.0f}s  mean degree {sum(degrees) / len(degrees):.1f}  "
          f"isolated {degrees.count(0)}  source neighbours {sorted(net.channel.neighbors(1, t))}")
