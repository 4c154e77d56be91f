"""Weighted means of positive numbers and the dyadic refinements of Young's inequality.

All series functions accept scalars or broadcastable arrays for ``a`` and
``b``; the returned :class:`SeriesEvaluation` carries arrays with a trailing
axis over the series index.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import _kernels
from ._kernels import HEINZ, PLAIN, SQRT, geo_numpy
from .dyadic import DEFAULT_DEPTH, DyadicSchedule, WeightLike, make_schedule, parse_weight
from .verdict import DEFAULT_TOL, InequalityVerdict, compare, equality


class MeanBundle(NamedTuple):
    nabla: float
    sharp: float
    heinz: float
    harmonic: float


class KMConstants(NamedTuple):
    r: float
    s: float


@dataclass(frozen=True)
class SeriesEvaluation:
    """A bound of the form ``base + sign * sum(terms)``.

    ``partial_sums[..., j]`` is the bound truncated after ``j + 1`` terms; with
    an empty series it is empty and ``value == base``.
    """

    base: np.ndarray
    terms: np.ndarray
    sign: int
    exact: bool

    @property
    def partial_sums(self) -> np.ndarray:
        return self.base[..., None] + self.sign * np.cumsum(self.terms, axis=-1)

    @property
    def value(self):
        if self.terms.shape[-1] == 0:
            return self.base[()]
        return self.partial_sums[..., -1][()]


def _pair(a, b):
    a, b = np.broadcast_arrays(np.asarray(a, dtype=np.float64),
                               np.asarray(b, dtype=np.float64))
    if np.any(~(a > 0)) or np.any(~(b > 0)):
        raise ValueError("a and b must be positive")
    return a, b


def _terms(x, y, schedule: DyadicSchedule, mode: int) -> np.ndarray:
    flat = _kernels.bracket_terms(x.ravel(), y.ravel(), schedule.exponent_table,
                                  schedule.coefficients, mode)
    return flat.reshape(x.shape + (schedule.depth,))


def _sharp(a, b, nu: Fraction):
    return geo_numpy(a, b, float(nu), float(1 - nu))


def km_constants(nu: WeightLike) -> KMConstants:
    nu = parse_weight(nu)
    return KMConstants(float(min(nu, 1 - nu)), float(max(nu, 1 - nu)))


def weighted_means(a, b, nu: WeightLike) -> MeanBundle:
    nu = parse_weight(nu)
    a, b = _pair(a, b)
    v = float(nu)
    nabla = float(1 - nu) * a + v * b
    sharp = _sharp(a, b, nu)
    heinz = 0.5 * (sharp + _sharp(a, b, 1 - nu))
    harmonic = 1.0 / (float(1 - nu) * (1.0 / a) + v * (1.0 / b))
    return MeanBundle(nabla[()], sharp[()], heinz[()], harmonic[()])


def refined_young_lower(a, b, nu: WeightLike, depth: int = DEFAULT_DEPTH) -> SeriesEvaluation:
    """``a #_nu b`` plus the dyadic refinement series; never exceeds ``a nabla_nu b``.

    Equal to the arithmetic mean once ``depth`` reaches n for ``nu = t/2**n``.
    """
    sched = make_schedule(nu, depth)
    a, b = _pair(a, b)
    return SeriesEvaluation(_sharp(a, b, sched.nu), _terms(a, b, sched, SQRT), +1, sched.exact)


def refined_young_reverse(a, b, nu: WeightLike, depth: int = DEFAULT_DEPTH) -> SeriesEvaluation:
    """Upper bound ``a #_nu b + (sqrt a - sqrt b)**2`` minus the swapped-role series."""
    sched = make_schedule(nu, depth)
    a, b = _pair(a, b)
    base = _sharp(a, b, sched.nu) + (np.sqrt(a) - np.sqrt(b)) ** 2
    return SeriesEvaluation(base, _terms(b, a, sched, SQRT), -1, sched.exact)


class SquaredRefinements(NamedTuple):
    y3: SeriesEvaluation  # lower bound on a^2 nabla b^2
    y4: SeriesEvaluation  # upper bound on a^2 nabla b^2
    y5: SeriesEvaluation  # lower bound on (a nabla b)^2
    y6: SeriesEvaluation  # upper bound on (a nabla b)^2


def squared_refinements(a, b, nu: WeightLike, depth: int = DEFAULT_DEPTH) -> SquaredRefinements:
    sched = make_schedule(nu, depth)
    a, b = _pair(a, b)
    r0 = float(sched.entries[0].r)
    sharp = _sharp(a, b, sched.nu)
    sharp_sq = sharp * sharp
    diff_sq = (a - b) ** 2
    fwd = _terms(a, b, sched, PLAIN)
    rev = _terms(b, a, sched, PLAIN)
    exact = sched.exact
    return SquaredRefinements(
        y3=SeriesEvaluation(sharp_sq, fwd, +1, exact),
        y4=SeriesEvaluation(sharp_sq + diff_sq, rev, -1, exact),
        y5=SeriesEvaluation(sharp_sq + r0 * r0 * diff_sq, fwd[..., 1:], +1, exact),
        # Tail taken from the swapped-role (y4) series; see y6_forward_tail.
        y6=SeriesEvaluation(sharp_sq + (1 - r0) ** 2 * diff_sq, rev[..., 1:], -1, exact),
    )


def y6_forward_tail(a, b, nu: WeightLike, depth: int = DEFAULT_DEPTH) -> SeriesEvaluation:
    """Upper bound on ``(a nabla b)**2`` with the k >= 1 tail in the forward roles.

    This variant does not hold in general (e.g. a=1e-3, b=1e3, nu=7/8); it is
    kept so reports can log how it differs from the valid ``y6``.
    """
    sched = make_schedule(nu, depth)
    a, b = _pair(a, b)
    r0 = float(sched.entries[0].r)
    sharp = _sharp(a, b, sched.nu)
    fwd = _terms(a, b, sched, PLAIN)
    return SeriesEvaluation(sharp * sharp + (1 - r0) ** 2 * (a - b) ** 2,
                            fwd[..., 1:], -1, sched.exact)


class HeinzBounds(NamedTuple):
    lower: SeriesEvaluation
    upper: SeriesEvaluation


def heinz_refinements(a, b, nu: WeightLike, depth: int = DEFAULT_DEPTH) -> HeinzBounds:
    """Bounds on ``(a + b)/2`` around the Heinz mean ``H_nu(a, b)``.

    Terms are second differences ``H_lo - 2 H_mid + H_hi`` of the Heinz mean
    along the dyadic grid, evaluated as written (not as squares), so their
    nonnegativity is an observable rather than a construction.
    """
    sched = make_schedule(nu, depth)
    a, b = _pair(a, b)
    heinz = 0.5 * (_sharp(a, b, sched.nu) + _sharp(b, a, sched.nu))
    terms = _terms(a, b, sched, HEINZ)
    return HeinzBounds(
        lower=SeriesEvaluation(heinz, terms, +1, sched.exact),
        upper=SeriesEvaluation(heinz + (np.sqrt(a) - np.sqrt(b)) ** 2, terms, -1, sched.exact),
    )


def zhao_wu_constant(nu: WeightLike) -> float:
    nu = parse_weight(nu)
    w = nu if nu <= Fraction(1, 2) else 1 - nu
    return float(min(2 * w, 1 - 2 * w))


def baseline_bounds(a: float, b: float, nu: WeightLike,
                    tol: float = DEFAULT_TOL) -> dict[str, InequalityVerdict]:
    """Verdicts for the earlier two-sided Young refinements.

    Keys: ``re1``/``re2`` (Kittaneh-Manasrah style), ``zw`` (fourth-root
    refinement of re1) and ``e10``/``e11`` (refinement of re2, branch chosen by
    ``nu <= 1/2``), each with ``-lower`` and ``-upper`` suffixes.
    """
    nu = parse_weight(nu)
    a = float(a)
    b = float(b)
    if not (a > 0 and b > 0):
        raise ValueError("a and b must be positive")
    v = float(nu)
    r, s = km_constants(nu)
    R = zhao_wu_constant(nu)
    nabla = float(1 - nu) * a + v * b
    sharp = float(_sharp(a, b, nu))
    sa, sb = np.sqrt(a), np.sqrt(b)
    q = (a * b) ** 0.25
    g = np.sqrt(a * b)
    root_sq = (sa - sb) ** 2
    diff_sq = (a - b) ** 2
    scale = max(a, b)
    scale_sq = scale * scale
    gap = nabla - sharp
    gap_sq = nabla * nabla - sharp * sharp

    if nu <= Fraction(1, 2):
        zw_lo = R * (q - sa) ** 2 + v * root_sq
        zw_hi = (1 - v) * root_sq - R * (q - sb) ** 2
        e_lo = R * (g - a) ** 2 + v * v * diff_sq
        e_hi = (1 - v) ** 2 * diff_sq - R * (g - b) ** 2
        e_id = "e10"
    else:
        zw_lo = R * (q - sb) ** 2 + (1 - v) * root_sq
        zw_hi = v * root_sq - R * (q - sa) ** 2
        e_lo = R * (g - b) ** 2 + (1 - v) ** 2 * diff_sq
        e_hi = v * v * diff_sq - R * (g - a) ** 2
        e_id = "e11"

    checks = [
        compare("re1-lower", sharp + r * root_sq, nabla, scale, tol),
        compare("re1-upper", nabla, sharp + s * root_sq, scale, tol),
        compare("re2-lower", r * r * diff_sq, gap_sq, scale_sq, tol),
        compare("re2-upper", gap_sq, s * s * diff_sq, scale_sq, tol),
        compare("zw-lower", zw_lo, gap, scale, tol),
        compare("zw-upper", gap, zw_hi, scale, tol),
        compare(f"{e_id}-lower", e_lo, gap_sq, scale_sq, tol),
        compare(f"{e_id}-upper", gap_sq, e_hi, scale_sq, tol),
    ]
    return {c.name: c for c in checks}


def scalar_verdicts(a: float, b: float, nu: WeightLike, depth: int = DEFAULT_DEPTH,
                    tol: float = DEFAULT_TOL) -> list[InequalityVerdict]:
    """Every scalar inequality for one (a, b, nu) at the given depth."""
    sched = make_schedule(nu, depth)
    means = weighted_means(a, b, sched.nu)
    scale = max(a, b)
    scale_sq = scale * scale
    lower = refined_young_lower(a, b, sched.nu, depth)
    upper = refined_young_reverse(a, b, sched.nu, depth)
    sq = squared_refinements(a, b, sched.nu, depth)
    hz = heinz_refinements(a, b, sched.nu, depth)
    v = float(sched.nu)
    sq_nabla = float(1 - sched.nu) * a * a + v * b * b
    nabla_sq = means.nabla * means.nabla
    am = 0.5 * (a + b)
    out = [
        compare("harmonic<=sharp", means.harmonic, means.sharp, scale, tol),
        compare("y1", lower.value, means.nabla, scale, tol),
        compare("y2", means.nabla, upper.value, scale, tol),
        compare("y3", sq.y3.value, sq_nabla, scale_sq, tol),
        compare("y4", sq_nabla, sq.y4.value, scale_sq, tol),
        compare("y5", sq.y5.value, nabla_sq, scale_sq, tol),
        compare("y6", nabla_sq, sq.y6.value, scale_sq, tol),
        compare("heinz-lower", hz.lower.value, am, scale, tol),
        compare("heinz-upper", am, hz.upper.value, scale, tol),
    ]
    out.extend(baseline_bounds(a, b, sched.nu, tol).values())
    if sched.exact:
        out.append(equality("y1-dyadic-eq", lower.value, means.nabla, scale, tol))
    return out
