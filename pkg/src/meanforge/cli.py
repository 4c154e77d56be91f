"""Command-line front end: ``meanforge {scalar,operator,hsnorm,all,schedule}``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import _kernels
from .dyadic import DEFAULT_DEPTH, format_schedule, make_schedule, parse_weight
from .harness import DEFAULT_NUS, TrialConfig, emit_report, render_report, run_suite

SEED_ENV = "MEANFORGE_SEED"


def parse_complex(text) -> complex:
    """Parse ``"re+imi"`` style entries (``"1.5-2i"``, ``"3"``, ``"-i"``); numbers pass through."""
    if isinstance(text, (int, float)):
        return complex(text)
    s = str(text).strip().replace(" ", "")
    if s.endswith(("i", "j")):
        s = s[:-1] + "j"
        if s in ("j", "+j", "-j"):
            s = s.replace("j", "1j")
        elif s[-2] in "+-":
            s = s[:-1] + "1j"
    try:
        return complex(s)
    except ValueError as exc:
        raise ValueError(f"cannot parse complex entry {text!r}") from exc


def read_matrix(rows) -> np.ndarray:
    m = np.array([[parse_complex(v) for v in row] for row in rows], dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError("matrix must be a list of equal-length rows")
    if np.all(m.imag == 0):
        return m.real.copy()
    return m


def load_matrix_file(path) -> dict:
    """Load ``{"A": rows, "B": rows, "X": rows}`` (X optional) from JSON."""
    with open(path) as fh:
        doc = json.load(fh)
    out = {}
    for key in ("A", "B", "X"):
        if key in doc:
            out[key] = read_matrix(doc[key])
    if "A" not in out or "B" not in out:
        raise ValueError(f"{path}: matrix file needs at least A and B")
    return out


def _common(p: argparse.ArgumentParser):
    p.add_argument("--nu", action="append", metavar="P/Q",
                   help="weight in (0,1); repeatable (default: %s)" % ", ".join(DEFAULT_NUS))
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--dim", type=int, default=4)
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0, help=f"master seed ({SEED_ENV} overrides)")
    p.add_argument("--field", choices=("real", "complex"), default="real")
    p.add_argument("--cond", type=float, default=1e4, help="condition number cap")
    p.add_argument("--out", help="report path (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--matrix-file", help="JSON file with explicit A, B (and X) matrices")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meanforge",
        description="Randomized verification of dyadic Young-inequality refinements.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("scalar", "positive numbers"),
                        ("operator", "positive definite matrices, Loewner order"),
                        ("hsnorm", "Hilbert-Schmidt norm inequalities"),
                        ("all", "every level")):
        _common(sub.add_parser(name, help=help_))
    sp = sub.add_parser("schedule", help="print the dyadic schedule of a weight")
    sp.add_argument("--nu", action="append", required=True, metavar="P/Q")
    sp.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "schedule":
            for text in args.nu:
                print(format_schedule(make_schedule(parse_weight(text), args.depth)))
            return 0
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        seed = args.seed
        if os.environ.get(SEED_ENV):
            seed = int(os.environ[SEED_ENV])
        matrices = load_matrix_file(args.matrix_file) if args.matrix_file else None
        nus = args.nu or list(DEFAULT_NUS)
        config = TrialConfig(
            master_seed=seed,
            trials=len(nus) if matrices is not None else args.trials,
            dim=matrices["A"].shape[0] if matrices is not None else args.dim,
            nu_list=tuple(nus),
            depth=args.depth,
            tol=args.tol,
            field=args.field,
            condition_cap=args.cond,
            matrices=matrices,
        )
    except (ValueError, OSError) as exc:
        print(f"meanforge: error: {exc}", file=sys.stderr)
        return 2
    logging.getLogger(__name__).info("kernel backend: %s", _kernels.backend())
    report = run_suite(config, args.command)
    summary = report["summary"]
    if args.out:
        try:
            emit_report(report, args.out, args.format)
        except OSError as exc:
            print(f"meanforge: error: cannot write report: {exc}", file=sys.stderr)
            return 2
        print(f"{summary['trials']} trials, {summary['failure_count']} failures, "
              f"{summary['equality_case_count']} equality cases -> {args.out}")
    else:
        sys.stdout.write(render_report(report, args.format))
    return 1 if summary["failure_count"] else 0


if __name__ == "__main__":
    sys.exit(main())
