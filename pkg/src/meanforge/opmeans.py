"""Weighted operator means of positive definite matrices and their refined Young bounds.

The geometric path ``t -> A #_t B`` is realized once per pair: with
``X = A^{-1/2} B A^{-1/2} = V diag(x) V*`` and ``W = A^{1/2} V``,

    A #_t B = W diag(x**t) W*

and every refinement series is the same congruence applied to a scalar
function of the eigenvalues ``x``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from ._kernels import HEINZ, SQRT, power_numpy
from .dyadic import DEFAULT_DEPTH, WeightLike, make_schedule, parse_weight
from .linalg import eigh, loewner_compare, require_pd
from .verdict import DEFAULT_TOL, InequalityVerdict


def _sym(m):
    return 0.5 * (m + m.conj().T)


def inv_pd(a) -> np.ndarray:
    dec = eigh(a)
    return _sym(dec.reconstruct(1.0 / dec.values))


class GeometricPath:
    """Cached spectral data for ``t -> A #_t B`` with A, B positive definite."""

    def __init__(self, a, b):
        a = require_pd(a, "A")
        b = require_pd(b, "B")
        if a.shape != b.shape:
            raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
        self.a = a
        self.b = b
        dec_a = eigh(a)
        root = np.sqrt(dec_a.values)
        self.a_half = _sym(dec_a.reconstruct(root))
        a_ihalf = _sym(dec_a.reconstruct(1.0 / root))
        dec_x = eigh(a_ihalf @ b @ a_ihalf)
        # X is congruent to B, hence positive definite; clip round-off only.
        self.x = np.maximum(dec_x.values, np.finfo(float).tiny)
        self.w = self.a_half @ dec_x.vectors

    def congruence(self, fx) -> np.ndarray:
        """``A^{1/2} f(X) A^{1/2}`` given the values ``f(x)`` on the spectrum of X."""
        return _sym((self.w * fx) @ self.w.conj().T)

    def sharp(self, t: float) -> np.ndarray:
        return self.congruence(power_numpy(self.x, float(t)))


def geometric_mean(a, b, t: float) -> np.ndarray:
    """``A #_t B = A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}``."""
    return GeometricPath(a, b).sharp(t)


class OperatorMeanBundle(NamedTuple):
    nabla: np.ndarray
    sharp: np.ndarray
    harmonic: np.ndarray
    heinz: np.ndarray


def _means(path: GeometricPath, nu) -> OperatorMeanBundle:
    v, w = float(nu), float(1 - nu)
    sharp = path.sharp(v)
    return OperatorMeanBundle(
        nabla=w * path.a + v * path.b,
        sharp=sharp,
        harmonic=inv_pd(w * inv_pd(path.a) + v * inv_pd(path.b)),
        heinz=0.5 * (sharp + path.sharp(w)),
    )


def operator_means(a, b, nu: WeightLike) -> OperatorMeanBundle:
    return _means(GeometricPath(a, b), parse_weight(nu))


@dataclass(frozen=True)
class OperatorSeries:
    """Matrix terms ``terms[k]`` of a refinement series; ``exact`` for terminated schedules."""

    terms: np.ndarray  # shape (K, n, n)
    exact: bool

    @property
    def partial_sums(self) -> np.ndarray:
        return np.cumsum(self.terms, axis=0)

    @property
    def total(self) -> np.ndarray:
        return self.terms.sum(axis=0)


def _series(path: GeometricPath, nu, depth: int, kind: str) -> OperatorSeries:
    sched = make_schedule(nu, depth)
    ones = np.ones_like(path.x)
    if kind == "forward":
        scal = _kernels.bracket_terms(ones, path.x, sched.exponent_table, sched.coefficients, SQRT)
    elif kind == "reverse":
        scal = _kernels.bracket_terms(path.x, ones, sched.exponent_table, sched.coefficients, SQRT)
    elif kind == "heinz":
        scal = _kernels.bracket_terms(ones, path.x, sched.exponent_table, sched.coefficients, HEINZ)
    else:
        raise ValueError(kind)
    terms = np.stack([path.congruence(scal[:, k]) for k in range(sched.depth)])
    return OperatorSeries(terms, sched.exact)


def operator_refinement_sum(a, b, nu: WeightLike, depth: int = DEFAULT_DEPTH,
                            kind: str = "forward") -> OperatorSeries:
    """Terms ``r_k [A#_lo B - 2 A#_mid B + A#_hi B]`` with lo = m_k/2^k, hi = lo + 2^-k.

    ``kind="reverse"`` uses the reflected exponents 1 - lo, 1 - mid, 1 - hi (the
    series of the reverse inequality); ``kind="heinz"`` uses Heinz means.
    """
    return _series(GeometricPath(a, b), parse_weight(nu), depth, kind)


def _young(path, nu, depth, tol, means=None):
    m = _means(path, nu) if means is None else means
    fwd = _series(path, nu, depth, "forward")
    rev = _series(path, nu, depth, "reverse")
    bridge = path.a - 2.0 * path.sharp(0.5) + path.b
    lower = loewner_compare(m.sharp + fwd.total, m.nabla, tol, "1e")
    reverse = loewner_compare(m.nabla, m.sharp + bridge - rev.total, tol, "rev-young")
    same_series = loewner_compare(m.nabla, m.sharp + bridge - fwd.total, tol, "rev-young-same-series")
    return lower, reverse, same_series, fwd


class YoungVerdicts(NamedTuple):
    lower: InequalityVerdict
    reverse: InequalityVerdict


def refined_operator_young(a, b, nu: WeightLike, depth: int = DEFAULT_DEPTH,
                           tol: float = DEFAULT_TOL) -> YoungVerdicts:
    """Loewner checks of ``A#B + sum <= A nabla B`` and its reverse.

    The reverse subtracts the reflected series: the operator image, with a = 1,
    of the scalar reverse bound.  The same-series form, which fails for e.g.
    A = [100], B = [1], nu = 1/4, is available as ``same_series_reverse_young``.
    """
    lower, reverse, _, _ = _young(GeometricPath(a, b), parse_weight(nu), depth, tol)
    return YoungVerdicts(lower, reverse)


def same_series_reverse_young(a, b, nu: WeightLike, depth: int = DEFAULT_DEPTH,
                              tol: float = DEFAULT_TOL) -> InequalityVerdict:
    """Reverse bound with the forward series subtracted; logged, not a valid inequality."""
    return _young(GeometricPath(a, b), parse_weight(nu), depth, tol)[2]


def geometric_harmonic_chain(a, b, nu: WeightLike, depth: int = DEFAULT_DEPTH,
                             tol: float = DEFAULT_TOL) -> dict[str, InequalityVerdict]:
    """Sandwiches a1 (on A, B), a2 (on the inverses) and a3 (inverted a2)."""
    nu = parse_weight(nu)
    path = GeometricPath(a, b)
    ipath = GeometricPath(inv_pd(path.a), inv_pd(path.b))
    return _chain(path, ipath, nu, depth, tol)


def _chain(path, ipath, nu, depth, tol, means=None, fwd=None):
    m = _means(path, nu) if means is None else means
    fwd = _series(path, nu, depth, "forward") if fwd is None else fwd
    ifwd = _series(ipath, nu, depth, "forward")
    isharp = ipath.sharp(float(nu))
    inabla = float(1 - nu) * ipath.a + float(nu) * ipath.b
    middle = isharp + ifwd.total
    mid_inv = inv_pd(middle)
    out = [
        loewner_compare(m.sharp, m.sharp + fwd.total, tol, "a1-lower"),
        loewner_compare(m.sharp + fwd.total, m.nabla, tol, "a1-upper"),
        loewner_compare(isharp, middle, tol, "a2-lower"),
        loewner_compare(middle, inabla, tol, "a2-upper"),
        loewner_compare(m.harmonic, mid_inv, tol, "a3-lower"),
        loewner_compare(mid_inv, m.sharp, tol, "a3-upper"),
    ]
    return {v.name: v for v in out}


class HeinzVerdicts(NamedTuple):
    lower: InequalityVerdict
    upper: InequalityVerdict


def _heinz(path, nu, depth, tol, means=None):
    m = _means(path, nu) if means is None else means
    hz = _series(path, nu, depth, "heinz")
    am = 0.5 * (path.a + path.b)
    bridge = path.a - 2.0 * path.sharp(0.5) + path.b
    return HeinzVerdicts(
        loewner_compare(m.heinz + hz.total, am, tol, "heinz-lower"),
        loewner_compare(am, m.heinz + bridge - hz.total, tol, "heinz-upper"),
    )


def operator_heinz_bounds(a, b, nu: WeightLike, depth: int = DEFAULT_DEPTH,
                          tol: float = DEFAULT_TOL) -> HeinzVerdicts:
    return _heinz(GeometricPath(a, b), parse_weight(nu), depth, tol)


def operator_verdicts(a, b, nu: WeightLike, depth: int = DEFAULT_DEPTH,
                      tol: float = DEFAULT_TOL) -> tuple[list[InequalityVerdict], dict]:
    """Every operator inequality for one PD pair, plus informational notes.

    Notes carry the margin of the same-series reverse form, which is logged
    but never counted as a failure.
    """
    nu = parse_weight(nu)
    path = GeometricPath(a, b)
    ipath = GeometricPath(inv_pd(path.a), inv_pd(path.b))
    means = _means(path, nu)
    lower, reverse, same_series, fwd = _young(path, nu, depth, tol, means)
    out = [
        loewner_compare(means.harmonic, means.sharp, tol, "0e-lower"),
        loewner_compare(means.sharp, means.nabla, tol, "0e-upper"),
        lower,
        reverse,
    ]
    out.extend(_chain(path, ipath, nu, depth, tol, means, fwd).values())
    out.extend(_heinz(path, nu, depth, tol, means))
    if fwd.exact:
        out.append(InequalityVerdict("1e-dyadic-eq", lower.lhs, lower.rhs, lower.margin,
                                     lower.scale, lower.equal, lower.equal))
    notes = {"rev-young-same-series": {"margin": same_series.margin, "holds": bool(same_series.holds)}}
    return out, notes
