"""Command line entry point: ``aodvsim run <config> [options]``.

Exit status is 0 on success, 1 for configuration errors and 2 when a run
breaks a simulator invariant.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from aodvsim.config import ConfigError, parse_config, validate
from aodvsim.engine import SimulationError
from aodvsim.experiment import emit_results, run_experiment

log = logging.getLogger("aodvsim")


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aodvsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario or sweep and write CSV results")
    run.add_argument("config", type=Path, help="dotted-key scenario file")
    run.add_argument("--seeds", type=_ints, help="comma-separated seeds, e.g. 1,2,3")
    run.add_argument("--attackers", type=_ints, help="attacker counts to sweep, e.g. 0,1,2,3,4")
    run.add_argument("--speeds", type=_floats, help="node speeds (m/s) to sweep; 0 = static")
    run.add_argument("--out", type=Path, default=Path("results"), help="output directory")
    run.add_argument("--trace", action="store_true", help="dump per-run event traces")
    run.add_argument("--tables", action="store_true", help="with --trace, dump final routing tables")
    run.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        config = parse_config(args.config)
        overrides = {}
        if args.seeds is not None:
            overrides["seeds"] = args.seeds
        if args.attackers is not None:
            overrides["sweep_attackers"] = args.attackers
        if args.speeds is not None:
            overrides["sweep_speeds"] = args.speeds
        config = dataclasses.replace(config, **overrides)
        problems = validate(config)
        if problems:
            raise ConfigError(problems)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"aodvsim: {exc}", file=sys.stderr)
        return 1

    args.out.mkdir(parents=True, exist_ok=True)
    try:
        result = run_experiment(config, trace_dir=args.out if args.trace else None,
                                tables=args.tables)
    except SimulationError as exc:
        print(f"aodvsim: run aborted: {exc}", file=sys.stderr)
        return 2
    for path in emit_results(result, args.out):
        log.info("wrote %s", path)
    for cell in result.cells:
        print(f"attackers={cell.attackers} speed={cell.speed:g} runs={len(cell.rows)} "
              f"mean_pdr={cell.summary.mean:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
