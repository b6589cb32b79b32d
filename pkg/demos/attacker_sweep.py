"""PDR against the number of black holes on the reference scenario.

Every attacker count reuses the same seeds, so mobility and traffic are
identical across a row and only the attack differs. Pass a number of seeds
on the command line (default 10).
"""

from __future__ import annotations

import sys
import time

from aodvsim import ScenarioConfig, run_experiment

seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 10
cfg = ScenarioConfig(seeds=tuple(range(1, seeds + 1)), sweep_attackers=(0, 1, 2, 3, 4))

start = time.perf_counter()
result = run_experiment(cfg)
print(f"{len(result.rows)} runs in {time.perf_counter() - start:.1f} s")
print("attackers  mean_pdr  min_pdr  max_pdr  absorbed/lost")
for cell in result.cells:
    lost = sum(r.metrics.sent - r.metrics.delivered for r in cell.rows)
    absorbed = sum(r.metrics.dropped_by_attacker for r in cell.rows)
    share = f"{absorbed / lost:.2f}" if lost else "-"
    s = cell.summary
    print(f"{cell.attackers:9d}  {s.mean:8.4f}  {s.min:7.4f}  {s.max:7.4f}  {share:>13s}")
