"""Scalar reductions of the operator inequalities for commuting pairs.

When A = Q diag(la) Q* and B = Q diag(lb) Q*, every difference R - L in a
Loewner verdict is Q diag(rhs_i - lhs_i) Q*, so its margin is the minimum of
the scalar margins over the eigenvalue pairs.
"""
import numpy as np

from meanforge.scalar import (heinz_refinements, refined_young_lower, refined_young_reverse,
                              weighted_means)

from . import oracles


def commuting_pair(rng, n, complex_=True, lo=1e-2, hi=1e2):
    q = oracles.random_unitary(rng, n, complex_)
    la = np.exp(rng.uniform(np.log(lo), np.log(hi), n))
    lb = np.exp(rng.uniform(np.log(lo), np.log(hi), n))

    def build(lam):
        m = (q * lam) @ q.conj().T
        return 0.5 * (m + m.conj().T)

    return build(la), build(lb), la, lb


def scalar_margins(la, lb, nu, depth):
    """Per-pair scalar margin (rhs - lhs) of each operator verdict."""
    m = weighted_means(la, lb, nu)
    lower = refined_young_lower(la, lb, nu, depth).value
    reverse = refined_young_reverse(la, lb, nu, depth).value
    mid = refined_young_lower(1 / la, 1 / lb, nu, depth).value
    inv = weighted_means(1 / la, 1 / lb, nu)
    hz = heinz_refinements(la, lb, nu, depth)
    am = 0.5 * (la + lb)
    return {
        "0e-lower": m.sharp - m.harmonic,
        "0e-upper": m.nabla - m.sharp,
        "1e": m.nabla - lower,
        "rev-young": reverse - m.nabla,
        "a1-lower": lower - m.sharp,
        "a1-upper": m.nabla - lower,
        "a2-lower": mid - inv.sharp,
        "a2-upper": inv.nabla - mid,
        "a3-lower": 1 / mid - m.harmonic,
        "a3-upper": m.sharp - 1 / mid,
        "heinz-lower": am - hz.lower.value,
        "heinz-upper": hz.upper.value - am,
    }
