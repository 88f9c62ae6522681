"""Command-line entry point.

    spinchain evolve --config cfg.json --out evolve.csv
    spinchain sweep --h-values 0,2,4 --out sweep.csv
    spinchain compare-schemes --p2 0.01 --out compare.csv
    spinchain verify

Exit codes: 0 success, 1 invalid configuration, 2 verification failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import BOUNDARIES, MODES, SCHEMES, ExperimentConfig
from .errors import SpinChainError
from .experiments import (
    run_compare_schemes,
    run_disorder_sweep,
    run_evolve,
    run_verify,
    write_csv,
)

log = logging.getLogger("spinchain")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VERIFY_FAILED = 2


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_experiment_args(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="JSON config file")
    p.add_argument("--out", type=Path, help="output CSV path (default: stdout)")
    p.add_argument("--seed", type=int)
    p.add_argument("--sites", type=int)
    p.add_argument("--g-xy", type=float, dest="g_xy")
    p.add_argument("--boundary", choices=BOUNDARIES)
    p.add_argument("--disorder", type=float, dest="disorder_bound", help="disorder bound h")
    p.add_argument("--fields", type=_float_list, dest="explicit_fields", help="explicit h_k list")
    p.add_argument("--realizations", type=int)
    p.add_argument("--initial-state", dest="initial_state", help="neel, domain_wall or a bitstring")
    p.add_argument("--dt", type=float)
    p.add_argument("--steps", type=int, dest="n_steps")
    p.add_argument("--scheme", choices=SCHEMES)
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--p2", type=float, help="two-qubit depolarizing probability")
    p.add_argument("--p1", type=float, help="single-qubit depolarizing probability")
    p.add_argument("--shots", type=int)
    p.add_argument("--trajectories", type=int)


_OVERRIDES = (
    "seed", "sites", "g_xy", "boundary", "disorder_bound", "explicit_fields", "realizations",
    "initial_state", "dt", "n_steps", "scheme", "mode", "p2", "p1", "shots", "trajectories",
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinchain", description=__doc__.splitlines()[0] if __doc__ else None)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="M_s(t) and probabilities for one configuration")
    _add_experiment_args(p)

    p = sub.add_parser("sweep", help="disorder-averaged M_s(t) for several disorder bounds")
    _add_experiment_args(p)
    p.add_argument("--h-values", type=_float_list, dest="h_values", help="comma-separated disorder bounds")

    p = sub.add_parser("compare-schemes", help="noisy 4-CNOT vs 2-CNOT Trotter circuits")
    _add_experiment_args(p)

    p = sub.add_parser("verify", help="check circuit identities against dense oracles")
    p.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    base = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    overrides = {k: getattr(args, k, None) for k in _OVERRIDES}
    if getattr(args, "h_values", None) is not None:
        overrides["h_values"] = args.h_values
    return base.with_overrides(**overrides)


def _emit(table, out: Path | None):
    if out is None:
        write_csv(table, sys.stdout)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as fh:
        write_csv(table, fh)
    log.info("wrote %d rows to %s", len(table.rows), out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")

    if args.command == "verify":
        report, ok = run_verify(args.perturb)
        sys.stdout.write(report)
        return EXIT_OK if ok else EXIT_VERIFY_FAILED

    try:
        config = load_config(args)
        if args.command == "evolve":
            table = run_evolve(config)
        elif args.command == "sweep":
            table = run_disorder_sweep(config)
        else:
            table = run_compare_schemes(config)
    except (SpinChainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(table, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
