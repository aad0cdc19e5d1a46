"""Command line entry point: ``unihardy {verify,sweep,sharpness,mc-check,run} --config FILE``."""
from __future__ import annotations

import argparse
import sys

from ..errors import ConfigError
from .config import load_config
from .runner import EXIT_CONFIG, run_config

_KINDS = {"verify": {"verify"}, "sweep": {"sweep"}, "sharpness": {"sharpness"},
          "mc-check": {"mc-check"}, "run": None}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="unihardy",
        description="Numerically verify weighted Hardy, Rellich and CKN inequalities from a JSON config.")
    parser.add_argument("--jobs", type=int, default=1, help="run up to N jobs in parallel")
    parser.add_argument("--out", default=None, help="output directory (overrides the config)")
    parser.add_argument("--seed", type=int, default=0, help="default seed for Monte Carlo jobs")
    parser.add_argument("--tol-scale", type=float, default=1.0,
                        help="multiply every pass/fail tolerance by X")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {"verify": "run the verify jobs", "sweep": "run the parameter sweeps",
             "sharpness": "run the sharpness scans", "mc-check": "run the Monte Carlo checks",
             "run": "run every job in the config"}
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=True, help="path to the JSON config")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    if not args.tol_scale > 0:
        print("error: --tol-scale must be positive", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run_config(cfg, jobs=args.jobs, out_dir=args.out, seed=args.seed,
                      tol_scale=args.tol_scale, kinds=_KINDS[args.command])


if __name__ == "__main__":
    sys.exit(main())
