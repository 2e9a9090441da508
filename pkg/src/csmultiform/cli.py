"""Command-line driver: ``csmultiform verify`` and ``csmultiform numeric``.

Exit status is 0 when every check passes, 1 when any check fails and 2 for
configuration or domain errors.
"""

from __future__ import annotations

import argparse
import sys

from . import checks
from .config import ConfigError, RunConfig, read_config_file
from .numeric.fields import PoleError
from .report import build_report, run_checks, tables_csv, to_json, to_text

FLAGS = {
    # flag: (config key, help)
    "--window": ("window", "window size N (coordinates 1..N)"),
    "--n-max": ("n_max", "highest CS level n (degree 2n+1)"),
    "--seed": ("seed", "seed for randomized checks"),
    "--trials": ("trials", "random cases per randomized symbolic check"),
    "--corner": ("corner", "lower corner coordinate of the closure cube"),
    "--edge": ("edge", "edge length of the closure cube"),
    "--c": ("c", "constant c of the exact solution -1/(c + sum xi)"),
    "--quad-order": ("quad_order", "Gauss-Legendre order for the generating action"),
    "--quad-orders": ("quad_orders", "refinement orders for the closure table, e.g. 2,4,8"),
    "--hbar": ("hbar", "hbar for the generating action"),
    "--h-schedule": ("h_schedule", "Goursat step sizes, strictly decreasing, e.g. 0.05,0.025"),
    "--goursat-c": ("goursat_c", "c for the Goursat convergence study"),
    "--goursat-edge": ("goursat_edge", "domain edge for the Goursat convergence study"),
    "--pi-h-schedule": ("pi_h_schedule", "step sizes for the path-independence study"),
    "--pi-edge": ("pi_edge", "domain edge for the path-independence study"),
    "--order-tol": ("order_tol", "allowed distance of observed rates from 4"),
    "--closure-tol": ("closure_tol", "on-shell tolerance for closed-surface actions"),
    "--threads": ("threads", "worker threads for independent checks"),
    "--out": ("out", "write the report here instead of stdout"),
    "--csv": ("csv", "also write convergence/closure tables as CSV"),
    "--format": ("format", "json or text"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="csmultiform", description="Chern-Simons multiform verification")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("verify", "exact symbolic identities"), ("numeric", "numeric checks on solutions")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", metavar="FILE", help="flat key = value config file; flags override it")
        for flag, (key, h) in FLAGS.items():
            kw = {"choices": ["json", "text"]} if key == "format" else {}
            p.add_argument(flag, dest=key, default=None, help=h, **kw)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = read_config_file(args.config) if args.config else {}
    for _, (key, _h) in FLAGS.items():
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    return RunConfig.from_mapping(values).checked(args.command)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.command == "numeric":
            checks.check_numeric_domain(cfg)
    except (ConfigError, OSError) as exc:
        print(f"csmultiform: config error: {exc}", file=sys.stderr)
        return 2
    except PoleError as exc:
        print(f"csmultiform: {exc}", file=sys.stderr)
        return 2

    suite = checks.verify_checks(cfg) if args.command == "verify" else checks.numeric_checks(cfg)
    report = build_report(args.command, cfg, run_checks(suite, cfg))
    text = to_json(report) if cfg.format == "json" else to_text(report)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cfg.csv:
        with open(cfg.csv, "w") as fh:
            fh.write(tables_csv(report))
    return 0 if report["summary"]["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
