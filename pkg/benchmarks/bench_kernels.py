"""Compare the numba and numpy series kernels.

    python3 benchmarks/bench_kernels.py [--pairs N ...] [--depth K] [--nu P/Q]

For each batch size and bracket mode, reports the best wall time per call and
the largest backend difference, measured against max(x, y) (squared for the
plain bracket), the natural size of a term.
"""
import argparse
import timeit
from fractions import Fraction

import numpy as np

from meanforge import _kernels
from meanforge.dyadic import make_schedule

MODES = {"sqrt": _kernels.SQRT, "plain": _kernels.PLAIN, "heinz": _kernels.HEINZ}


def best_time(fn, budget=0.5):
    """Seconds per call, best of five timing rounds sized to ``budget``."""
    number, elapsed = 1, 0.0
    while elapsed < budget / 5:
        number *= 2
        elapsed = timeit.timeit(fn, number=number)
    return min(timeit.repeat(fn, number=number, repeat=5)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, nargs="+", default=[1, 16, 1000, 20_000])
    ap.add_argument("--depth", type=int, default=64)
    ap.add_argument("--nu", default="1/3")
    args = ap.parse_args(argv)
    if _kernels.bracket_terms_numba is None:
        raise SystemExit("numba is not importable; nothing to compare")

    sched = make_schedule(Fraction(args.nu), args.depth)
    expo, coef = sched.exponent_table, sched.coefficients
    rng = np.random.default_rng(0)

    print(f"depth={args.depth} nu={args.nu}")
    print(f"{'pairs':>6} {'mode':<6} {'numba us':>10} {'numpy us':>10} {'speedup':>8} {'max diff':>10}")
    for n in args.pairs:
        x = np.exp(rng.uniform(-7, 7, n))
        y = np.exp(rng.uniform(-7, 7, n))
        for name, mode in MODES.items():
            jit = _kernels.bracket_terms_numba(x, y, expo, coef, mode)  # compile
            ref = _kernels.bracket_terms_numpy(x, y, expo, coef, mode)
            t_jit = best_time(lambda: _kernels.bracket_terms_numba(x, y, expo, coef, mode))
            t_np = best_time(lambda: _kernels.bracket_terms_numpy(x, y, expo, coef, mode))
            scale = np.maximum(x, y)[:, None] ** (2 if mode == _kernels.PLAIN else 1)
            diff = float(np.max(np.abs(jit - ref) / scale))
            print(f"{n:>6} {name:<6} {1e6 * t_jit:>10.1f} {1e6 * t_np:>10.1f} "
                  f"{t_np / t_jit:>7.1f}x {diff:>10.1e}")


if __name__ == "__main__":
    main()
