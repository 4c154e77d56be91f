"""Randomized verification runs and report emission."""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from . import _kernels
from .dyadic import DEFAULT_DEPTH, parse_weight
from .hsnorm import HSInstance, hs_verdicts
from .opmeans import operator_verdicts
from .scalar import scalar_verdicts, weighted_means, y6_forward_tail

log = logging.getLogger(__name__)

LEVELS = ("scalar", "operator", "hsnorm")
DEFAULT_NUS = ("1/4", "1/3", "1/2", "2/5", "5/8", "7/8")
SEED_DERIVATION = "numpy.random.SeedSequence([master_seed, trial]).generate_state(1, uint64)[0]"
SCALAR_RANGE = (1e-3, 1e3)


@dataclass(frozen=True)
class TrialConfig:
    master_seed: int = 0
    trials: int = 1000
    dim: int = 4
    nu_list: tuple[Fraction, ...] = tuple(Fraction(s) for s in DEFAULT_NUS)
    depth: int = DEFAULT_DEPTH
    tol: float = 1e-10
    field: str = "real"
    condition_cap: float = 1e4
    matrices: Optional[dict] = dataclasses.field(default=None, compare=False)

    def __post_init__(self):
        if self.trials < 0:
            raise ValueError("trials must be >= 0")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not self.condition_cap >= 1:
            raise ValueError("condition_cap must be >= 1")
        if self.field not in ("real", "complex"):
            raise ValueError("field must be 'real' or 'complex'")
        if not self.nu_list:
            raise ValueError("nu_list must not be empty")
        object.__setattr__(self, "nu_list", tuple(parse_weight(v) for v in self.nu_list))

    def echo(self) -> dict:
        return {
            "master_seed": self.master_seed,
            "trials": self.trials,
            "dim": self.dim,
            "nu_list": [str(v) for v in self.nu_list],
            "depth": self.depth,
            "tol": self.tol,
            "field": self.field,
            "condition_cap": self.condition_cap,
            "matrix_file": self.matrices is not None,
            "seed_derivation": SEED_DERIVATION,
        }


def trial_seed(master_seed: int, trial: int) -> int:
    ss = np.random.SeedSequence([int(master_seed) % 2**64, int(trial)])
    return int(ss.generate_state(1, np.uint64)[0])


def _gaussian(rng, shape, field):
    g = rng.standard_normal(shape)
    if field == "complex":
        g = (g + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return g


def generate_pd(seed: int, dim: int, condition_cap: float = 1e4,
                field: str = "real") -> np.ndarray:
    """Random positive definite matrix ``M M* + eps I`` with condition number <= cap.

    ``eps`` is the smallest shift that brings ``lambda_max / lambda_min`` down to
    the cap (zero when the Gram matrix already satisfies it).
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if condition_cap < 1:
        raise ValueError("condition_cap must be >= 1")
    rng = np.random.default_rng(seed)
    m = _gaussian(rng, (dim, dim), field) / np.sqrt(dim)
    g = m @ m.conj().T
    g = 0.5 * (g + g.conj().T)
    lam = np.linalg.eigvalsh(g)
    if condition_cap == 1:
        return float(np.mean(lam)) * np.eye(dim, dtype=g.dtype)
    need = (lam[-1] - condition_cap * lam[0]) / (condition_cap - 1.0)
    eps = max(need * (1.0 + 1e-6), 0.0)
    if lam[0] + eps <= 0:  # pragma: no cover - only reachable with a degenerate Gram matrix
        eps = lam[-1] / (condition_cap - 1.0)
    return g + eps * np.eye(dim, dtype=g.dtype)


def _digest(*arrays) -> str:
    h = hashlib.sha256()
    for arr in arrays:
        arr = np.ascontiguousarray(arr)
        h.update(str(arr.dtype).encode())
        h.update(str(arr.shape).encode())
        h.update(arr.tobytes())
    return h.hexdigest()[:16]


def _scalar_trial(rng, nu, config):
    lo, hi = np.log(SCALAR_RANGE[0]), np.log(SCALAR_RANGE[1])
    a, b = np.exp(rng.uniform(lo, hi, size=2))
    verdicts = scalar_verdicts(float(a), float(b), nu, config.depth, config.tol)
    nabla = float(weighted_means(a, b, nu).nabla)
    forward = float(y6_forward_tail(a, b, nu, config.depth).value)
    notes = {"a": float(a), "b": float(b), "y6-forward-tail-margin": forward - nabla * nabla}
    return verdicts, notes, _digest(np.array([a, b]))


def _matrix_pair(rng, config):
    if config.matrices is not None:
        return config.matrices["A"], config.matrices["B"]
    sa, sb = (int(s) for s in rng.integers(0, 2**63 - 1, size=2))
    return (generate_pd(sa, config.dim, config.condition_cap, config.field),
            generate_pd(sb, config.dim, config.condition_cap, config.field))


def _operator_trial(rng, nu, config):
    a, b = _matrix_pair(rng, config)
    verdicts, notes = operator_verdicts(a, b, nu, config.depth, config.tol)
    return verdicts, notes, _digest(a, b)


def _hs_trial(rng, nu, config):
    a, b = _matrix_pair(rng, config)
    if config.matrices is not None and config.matrices.get("X") is not None:
        x = config.matrices["X"]
    else:
        x = _gaussian(rng, a.shape, config.field)
    verdicts, notes = hs_verdicts(HSInstance(a, b, x, nu), config.depth, config.tol)
    return verdicts, notes, _digest(a, b, x)


_RUNNERS = {"scalar": _scalar_trial, "operator": _operator_trial, "hsnorm": _hs_trial}


def run_trial(config: TrialConfig, index: int, level: str) -> dict:
    seed = trial_seed(config.master_seed, index)
    rng = np.random.default_rng(seed)
    nu = config.nu_list[index % len(config.nu_list)]
    levels = LEVELS if level == "all" else (level,)
    record = {"trial": index, "seed": seed, "nu": str(nu), "dim": config.dim,
              "depth": config.depth, "verdicts": [], "notes": {}, "digest": {}}
    for lv in levels:
        verdicts, notes, digest = _RUNNERS[lv](rng, nu, config)
        record["digest"][lv] = digest
        record["notes"][lv] = notes
        for v in verdicts:
            row = v.as_row()
            row["level"] = lv
            record["verdicts"].append(row)
    return record


def summarize(trials: list[dict]) -> dict:
    min_margin: dict[str, float] = {}
    failures = []
    equality_cases = 0
    for rec in trials:
        for row in rec["verdicts"]:
            key = f"{row['level']}:{row['inequality']}"
            min_margin[key] = min(min_margin.get(key, np.inf), row["margin"])
            if not row["holds"]:
                failures.append({"trial": rec["trial"], "seed": rec["seed"], "inequality": key,
                                 "margin": row["margin"]})
            elif row["inequality"].endswith("-eq"):
                equality_cases += 1
    return {
        "trials": len(trials),
        "failure_count": len(failures),
        "equality_case_count": equality_cases,
        "min_margin": dict(sorted(min_margin.items())),
        "failures": failures,
    }


def run_suite(config: TrialConfig, level: str = "all") -> dict:
    """Run ``config.trials`` trials at one level (or all) and assemble a report.

    Trials are independent; records are kept in trial-index order and the
    report is a pure function of the config.
    """
    if level not in LEVELS + ("all",):
        raise ValueError(f"unknown level {level!r}")
    trials = []
    for i in range(config.trials):
        rec = run_trial(config, i, level)
        bad = [r["inequality"] for r in rec["verdicts"] if not r["holds"]]
        if bad:
            log.warning("trial %d (seed %d, nu=%s) failed: %s", i, rec["seed"], rec["nu"], bad)
        trials.append(rec)
    # Backends may differ in the last ulp of a power, so the report names its own.
    return {"config": config.echo(), "kernel_backend": _kernels.backend(), "level": level,
            "trials": trials, "summary": summarize(trials)}


CSV_COLUMNS = ("trial", "inequality_id", "lhs_scale", "margin", "holds")


def render_report(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in report["trials"]:
            for row in rec["verdicts"]:
                writer.writerow([rec["trial"], f"{row['level']}:{row['inequality']}",
                                 repr(row["scale"]), repr(row["margin"]), row["holds"]])
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def emit_report(report: dict, path, fmt: str = "json") -> None:
    Path(path).write_text(render_report(report, fmt))
