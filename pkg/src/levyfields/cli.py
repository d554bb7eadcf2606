"""Command-line runner: ``levyfields run|list|validate``.

Exit status is 0 on success, 1 when a numerical check fails and 2 for
configuration or usage errors.
"""

from __future__ import annotations

import argparse
import platform
import sys
import time
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .config import SEED_ENV, load_config
from .errors import ConfigError
from .experiments import EXPERIMENTS, describe
from .io import write_json

EXIT_OK, EXIT_CHECK, EXIT_CONFIG = 0, 1, 2


def _experiment_table() -> str:
    return "\n\n".join(describe(n) for n in EXPERIMENTS)


def new_run_dir(base: Path, name: str) -> Path:
    """First free ``base/<name>-NNN``; existing runs are never touched."""
    base.mkdir(parents=True, exist_ok=True)
    i = 1
    while True:
        path = base / f"{name}-{i:03d}"
        try:
            path.mkdir()
            return path
        except FileExistsError:
            i += 1


def cmd_list(args) -> int:
    for name, e in EXPERIMENTS.items():
        print(f"{name:<16} {e.summary}")
        print(f"{'':<16} parameters: {', '.join(e.params)}")
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"ok: {cfg.experiment} (seed {cfg.seed})")
    return EXIT_OK


def cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    if args.threads < 1:
        print("config error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    out = new_run_dir(Path(args.out), cfg.experiment)
    start = time.perf_counter()
    checks = EXPERIMENTS[cfg.experiment].run(cfg, out, args.threads)
    wall = time.perf_counter() - start
    failed = [c for c in checks if not c.passed]
    write_json(out / "manifest.json", {
        "config": cfg.echo(),
        "seed": cfg.seed,
        "versions": {"levyfields": __version__, "python": platform.python_version(),
                     "numpy": np.__version__, "scipy": scipy.__version__},
        "threads": args.threads,
        "wall_time_s": wall,
        "checks": [c.to_dict() for c in checks],
        "status": "fail" if failed else "ok",
    })
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}")
    print(f"outputs: {out}")
    return EXIT_CHECK if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levyfields",
        description="Numerical experiments on fields built from convoluted Levy white noise.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.RawDescriptionHelpFormatter

    run = sub.add_parser("run", help="run one experiment config", formatter_class=fmt,
                         epilog=f"{SEED_ENV} overrides the config seed.\n\n" + _experiment_table())
    run.add_argument("config", help="TOML experiment config")
    run.add_argument("--out", default="runs", help="parent directory of run folders (default: runs)")
    run.add_argument("--threads", type=int, default=1, help="worker cap for Monte Carlo (default: 1)")
    run.set_defaults(func=cmd_run)

    lst = sub.add_parser("list", help="list the experiment catalog")
    lst.set_defaults(func=cmd_list)

    val = sub.add_parser("validate", help="check a config without running it", formatter_class=fmt,
                         epilog=_experiment_table())
    val.add_argument("config", help="TOML experiment config")
    val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
