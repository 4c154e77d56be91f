"""Hilbert-Schmidt norm refinements of the squared Young inequality.

Two independent evaluation routes are provided:

* :func:`direct_breakdown` forms every matrix (``A^{1-nu} X B^nu``, ``AX - XB``,
  ...) explicitly and takes its Hilbert-Schmidt norm;
* :func:`entrywise_oracle` diagonalizes ``A = U diag(lam) U*`` and
  ``B = V diag(mu) V*`` once, sets ``Y = U* X V`` and evaluates each squared
  norm as ``sum_ij w(lam_i, mu_j) |y_ij|**2``.

Bounds are assembled from the entrywise route: its tail terms are sums of
nonnegative scalar brackets, free of the cancellation that limits deep direct
terms, and a 1x1 input follows the scalar arithmetic exactly.  The direct
route serves as the cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from ._kernels import PLAIN, geo_numpy
from .dyadic import DEFAULT_DEPTH, DyadicSchedule, WeightLike, make_schedule, parse_weight
from .linalg import clipped_spectrum, eigh, fractional_power, hs_norm_sq, require_psd
from .scalar import zhao_wu_constant
from .verdict import DEFAULT_TOL, InequalityVerdict, compare, equality

AGREEMENT_RTOL = 1e-9


@dataclass(frozen=True)
class HSInstance:
    A: np.ndarray
    B: np.ndarray
    X: np.ndarray
    nu: Fraction

    def __post_init__(self):
        a = require_psd(self.A, "A")
        b = require_psd(self.B, "B")
        x = np.asarray(self.X)
        if not (a.shape == b.shape == x.shape):
            raise ValueError(f"shape mismatch: A{a.shape} B{b.shape} X{x.shape}")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)
        object.__setattr__(self, "X", x)
        object.__setattr__(self, "nu", parse_weight(self.nu))


@dataclass(frozen=True)
class HSBreakdown:
    mixed_norm_sq: float          # ||A^{1-nu} X B^nu||^2
    commutator_norm_sq: float     # ||AX - XB||^2
    convex_norm_sq: float         # ||(1-nu) AX + nu XB||^2
    tail_terms: np.ndarray        # r_k ||A^{1-lo} X B^lo - A^{1-hi} X B^hi||^2, k >= 1
    reverse_tail_terms: np.ndarray  # r_k ||A^lo X B^{1-lo} - A^hi X B^{1-hi}||^2, k >= 1
    convex_minus_norm_sq: float = field(default=0.0)  # ||(1-nu) AX - nu XB||^2

    def fields(self) -> dict:
        return {
            "mixed_norm_sq": self.mixed_norm_sq,
            "commutator_norm_sq": self.commutator_norm_sq,
            "convex_norm_sq": self.convex_norm_sq,
            "convex_minus_norm_sq": self.convex_minus_norm_sq,
            "tail_terms": self.tail_terms,
            "reverse_tail_terms": self.reverse_tail_terms,
        }


class _Powers:
    def __init__(self, m):
        self.m = m
        self.dec = eigh(m)
        self._cache = {}

    def __call__(self, t: float) -> np.ndarray:
        if t not in self._cache:
            self._cache[t] = fractional_power(self.m, t, decomposition=self.dec)
        return self._cache[t]


def _tail_schedule(inst: HSInstance, depth: int) -> DyadicSchedule:
    return make_schedule(inst.nu, depth).tail()


def direct_breakdown(inst: HSInstance, depth: int = DEFAULT_DEPTH) -> HSBreakdown:
    a, b, x = inst.A, inst.B, inst.X
    v, w = float(inst.nu), float(1 - inst.nu)
    pa, pb = _Powers(a), _Powers(b)
    ax, xb = a @ x, x @ b
    tail = _tail_schedule(inst, depth)
    fwd, rev = [], []
    for (k, m, r), row in zip(tail.entries, tail.exponent_table):
        lo, lo_c, hi, hi_c = row[:4]
        d = pa(lo_c) @ x @ pb(lo) - pa(hi_c) @ x @ pb(hi)
        fwd.append(float(r) * hs_norm_sq(d))
        d = pa(lo) @ x @ pb(lo_c) - pa(hi) @ x @ pb(hi_c)
        rev.append(float(r) * hs_norm_sq(d))
    return HSBreakdown(
        mixed_norm_sq=hs_norm_sq(pa(w) @ x @ pb(v)),
        commutator_norm_sq=hs_norm_sq(ax - xb),
        convex_norm_sq=hs_norm_sq(w * ax + v * xb),
        tail_terms=np.array(fwd),
        reverse_tail_terms=np.array(rev),
        convex_minus_norm_sq=hs_norm_sq(w * ax - v * xb),
    )


def entrywise_oracle(inst: HSInstance, depth: int = DEFAULT_DEPTH) -> HSBreakdown:
    dec_a, dec_b = eigh(inst.A), eigh(inst.B)
    lam = clipped_spectrum(dec_a, 0.5)
    mu = clipped_spectrum(dec_b, 0.5)
    y = dec_a.vectors.conj().T @ inst.X @ dec_b.vectors
    weight = (y.real ** 2 + y.imag ** 2).ravel() if np.iscomplexobj(y) else (y * y).ravel()
    n = lam.size
    li = np.repeat(lam, n)
    mj = np.tile(mu, n)
    v, w = float(inst.nu), float(1 - inst.nu)
    tail = _tail_schedule(inst, depth)
    fwd = _kernels.bracket_terms(li, mj, tail.exponent_table, tail.coefficients, PLAIN)
    rev = _kernels.bracket_terms(mj, li, tail.exponent_table, tail.coefficients, PLAIN)
    mixed = geo_numpy(li, mj, v, w)
    return HSBreakdown(
        mixed_norm_sq=float(weight @ (mixed * mixed)),
        commutator_norm_sq=float(weight @ (li - mj) ** 2),
        convex_norm_sq=float(weight @ (w * li + v * mj) ** 2),
        tail_terms=weight @ fwd,
        reverse_tail_terms=weight @ rev,
        convex_minus_norm_sq=float(weight @ (w * li - v * mj) ** 2),
    )


def route_discrepancy(direct: HSBreakdown, oracle: HSBreakdown) -> dict[str, float]:
    """Relative disagreement per field, ``|d - o| / max(|o|, tiny)``.

    Tail entries are compared summed over k: individual deep terms are
    differences of nearly equal matrices and carry only absolute accuracy.
    """
    out = {}
    for key, dv in direct.fields().items():
        ov = oracle.fields()[key]
        dv, ov = float(np.sum(dv)), float(np.sum(ov))
        out[key] = abs(dv - ov) / max(abs(ov), np.finfo(float).tiny) if dv != ov else 0.0
    return out


def _tail_sum(terms) -> float:
    # Sequential, in k order, matching the scalar partial sums.
    return float(np.cumsum(terms)[-1]) if len(terms) else 0.0


def _bounds(inst: HSInstance, br: HSBreakdown, depth: int):
    r0 = float(make_schedule(inst.nu, depth).entries[0].r)
    lower = br.mixed_norm_sq + r0 * r0 * br.commutator_norm_sq + _tail_sum(br.tail_terms)
    upper_base = br.mixed_norm_sq + (1 - r0) ** 2 * br.commutator_norm_sq
    return (lower, upper_base - _tail_sum(br.reverse_tail_terms),
            upper_base - _tail_sum(br.tail_terms))


def hs_refined_lower(inst: HSInstance, depth: int = DEFAULT_DEPTH,
                     tol: float = DEFAULT_TOL, breakdown: HSBreakdown | None = None) -> InequalityVerdict:
    """``||A^{1-nu}XB^nu||^2 + r_0^2 ||AX-XB||^2 + tail <= ||(1-nu)AX + nu XB||^2``."""
    br = entrywise_oracle(inst, depth) if breakdown is None else breakdown
    lower, _, _ = _bounds(inst, br, depth)
    return compare("hs-lower", lower, br.convex_norm_sq, br.convex_norm_sq, tol)


def hs_refined_upper(inst: HSInstance, depth: int = DEFAULT_DEPTH,
                     tol: float = DEFAULT_TOL, breakdown: HSBreakdown | None = None) -> InequalityVerdict:
    """``||(1-nu)AX + nu XB||^2 <= mixed + (1-r_0)^2 ||AX-XB||^2 - reverse tail``."""
    br = entrywise_oracle(inst, depth) if breakdown is None else breakdown
    _, upper, _ = _bounds(inst, br, depth)
    return compare("hs-upper", br.convex_norm_sq, upper, br.convex_norm_sq, tol)


def baseline_hs(inst: HSInstance, tol: float = DEFAULT_TOL) -> dict[str, InequalityVerdict]:
    """The two-sided ``b1`` (nu <= 1/2) or ``b2`` (nu > 1/2) bounds on convex - mixed."""
    a, b, x = inst.A, inst.B, inst.X
    v = float(inst.nu)
    R = zhao_wu_constant(inst.nu)
    pa, pb = _Powers(a), _Powers(b)
    ax, xb = a @ x, x @ b
    geo = pa(0.5) @ x @ pb(0.5)
    comm = hs_norm_sq(ax - xb)
    convex = hs_norm_sq((1 - v) * ax + v * xb)
    gap = convex - hs_norm_sq(pa(1 - v) @ x @ pb(v))
    to_ax = hs_norm_sq(geo - ax)
    to_xb = hs_norm_sq(geo - xb)
    if inst.nu <= Fraction(1, 2):
        tag, lo, hi = "b1", v * v * comm + R * to_ax, (1 - v) ** 2 * comm - R * to_xb
    else:
        tag, lo, hi = "b2", (1 - v) ** 2 * comm + R * to_xb, v * v * comm - R * to_ax
    return {
        f"{tag}-lower": compare(f"{tag}-lower", lo, gap, convex, tol),
        f"{tag}-upper": compare(f"{tag}-upper", gap, hi, convex, tol),
    }


def hs_verdicts(inst: HSInstance, depth: int = DEFAULT_DEPTH,
                tol: float = DEFAULT_TOL) -> tuple[list[InequalityVerdict], dict]:
    """All norm inequalities for one instance plus logged-only variants.

    The notes record the ``(1-nu)AX - nu XB`` reading and the same-series upper
    bound; neither is counted as a failure.
    """
    direct = direct_breakdown(inst, depth)
    oracle = entrywise_oracle(inst, depth)
    lower, upper, forward_upper = _bounds(inst, oracle, depth)
    scale = oracle.convex_norm_sq
    out = [
        hs_refined_lower(inst, depth, tol, oracle),
        hs_refined_upper(inst, depth, tol, oracle),
    ]
    out.extend(baseline_hs(inst, tol).values())
    worst = max(route_discrepancy(direct, oracle).values())
    out.append(compare("hs-routes", worst, AGREEMENT_RTOL, 1.0, 0.0))
    if make_schedule(inst.nu, depth).exact:
        out.append(equality("hs-dyadic-eq", lower, scale, scale, tol))
    minus = oracle.convex_minus_norm_sq
    notes = {
        "minus-sign-lower-margin": minus - lower,
        "minus-sign-upper-margin": upper - minus,
        "upper-forward-tail-margin": forward_upper - oracle.convex_norm_sq,
    }
    return out, notes
