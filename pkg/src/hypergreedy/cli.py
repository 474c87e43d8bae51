"""Command-line interface: ``hypergreedy {theory,simulate,compare,sweep}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import degseq, harness
from .errors import HyperGreedyError


def _add_sim_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, type=Path, help="degree sequence JSON")
    p.add_argument("--n", required=True, type=int, help="number of vertices")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="seed of the first trial")
    p.add_argument("--record-every", type=int, default=None)
    p.add_argument("--out", required=True, type=Path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypergreedy",
        description="Random greedy matching on configuration-model hypergraphs.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theory", help="fluid-limit solution")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--grid", type=int, default=None, help="trajectory sample points")
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("simulate", help="run greedy trials")
    _add_sim_args(p)
    p.add_argument("--mode", choices=harness.MODES, default="point")
    p.add_argument("--require-simple", action="store_true")
    p.add_argument("--dump", action="store_true", help="write realized hypergraphs")

    p = sub.add_parser("compare", help="simulation vs theory report")
    _add_sim_args(p)
    p.add_argument("--mode", choices=harness.MODES, default="point")
    p.add_argument("--tol-leftover", type=float, default=harness.TOL_LEFTOVER)
    p.add_argument("--tol-traj", type=float, default=harness.TOL_TRAJ)

    p = sub.add_parser("sweep", help="regular closed-form table")
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--delta-min", required=True, type=int)
    p.add_argument("--delta-max", required=True, type=int)
    p.add_argument("--out", required=True, type=Path)
    return parser


def _config(args) -> harness.ExperimentConfig:
    return harness.ExperimentConfig(
        ds=degseq.load(args.config),
        n=args.n,
        trials=args.trials,
        base_seed=args.seed,
        mode=args.mode,
        record_every=args.record_every,
        output_dir=args.out,
        require_simple=getattr(args, "require_simple", False),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "theory":
            ds = degseq.load(args.config)
            paths = harness.write_theory(ds, args.out, args.grid)
            print(paths[0].read_text(), end="")
            return 0
        if args.command == "sweep":
            path = harness.write_sweep(args.k, args.delta_min, args.delta_max, args.out)
            print(path.read_text(), end="")
            return 0
        cfg = _config(args)
        if args.command == "simulate":
            if args.dump and cfg.mode != "explicit":
                raise ValueError("--dump needs --mode explicit")
            agg = harness.run_trials(cfg)
            paths = harness.write_sim_outputs(agg, args.out, dump=args.dump)
            print(paths[0].read_text(), end="")
            return 0
        agg = harness.run_trials(cfg)
        harness.write_sim_outputs(agg, args.out)
        report = harness.compare(agg, cfg.ds, args.tol_leftover, args.tol_traj)
        harness.write_report(report, args.out)
        print(json.dumps(report.to_dict(), indent=2))
        return 0 if report.passed else 1
    except (HyperGreedyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
