"""Command-line entry point: ``fluidalg run | check | green``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import storage
from .chain_complex import LatticeError
from .checks import run_checks
from .config import CONFIG_KEYS, GREEN_METHODS, ConfigError, format_config, parse_config
from .hodge import build_green_set
from .simulator import IntegrationError, run

log = logging.getLogger("fluidalg")

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_USAGE = 2
EXIT_INTEGRATION = 3


def _add_run(sub):
    p = sub.add_parser("run", help="integrate the Euler equation and write diagnostics")
    p.add_argument("--config", type=Path, help="key = value configuration file")
    for key in CONFIG_KEYS:
        p.add_argument(f"--{key.replace('_', '-')}", dest=key, metavar="VALUE",
                       help=f"override '{key}'")
    p.add_argument("--green-cache", type=Path,
                   help="load the Green set from this file instead of rebuilding it")


def _add_check(sub):
    p = sub.add_parser("check", help="run the invariant checks without time stepping")
    p.add_argument("--N", type=int, action="append",
                   help="lattice period (repeatable, default 3 and 5)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--green-method", choices=GREEN_METHODS, default="cg")


def _add_green(sub):
    p = sub.add_parser("green", help="build the Green set and write it to a cache file")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--method", choices=GREEN_METHODS, default="cg")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fluidalg", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run(sub)
    _add_check(sub)
    _add_green(sub)
    return parser


def cmd_run(args) -> int:
    overrides = [(k, getattr(args, k)) for k in CONFIG_KEYS if getattr(args, k) is not None]
    cfg = parse_config(overrides, args.config)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(format_config(cfg))
    green = None
    if args.green_cache is not None:
        green = storage.read_green_set(args.green_cache, cfg.N)

    def snapshot(step, X):
        storage.write_snapshot(X, out / f"state_{step:08d}.fceu")

    with storage.DiagnosticsWriter(out / "diagnostics.csv") as writer:
        series = run(cfg, on_diagnostics=writer.write, on_snapshot=snapshot, green=green)
    last = series[-1]
    print(f"{cfg.steps} steps, energy {last.energy:.17g}, helicity {last.helicity:.17g}")
    return EXIT_OK


def cmd_check(args) -> int:
    failed = 0
    for N in args.N or [3, 5]:
        print(f"N = {N}")
        for result in run_checks(N, args.seed, args.green_method):
            print("  " + result.line())
            failed += not result.ok
    print(f"{failed} check(s) failed" if failed else "all checks passed")
    return EXIT_FAILED_CHECK if failed else EXIT_OK


def cmd_green(args) -> int:
    green = build_green_set(args.N, args.method)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    storage.write_green_set(green, args.out)
    print(f"wrote Green set for N={args.N} to {args.out}")
    return EXIT_OK


COMMANDS = {"run": cmd_run, "check": cmd_check, "green": cmd_green}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, LatticeError, storage.FormatError, OSError) as exc:
        print(f"fluidalg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrationError as exc:
        print(f"fluidalg: integration failed: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION
