from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from meanforge.hsnorm import (HSInstance, baseline_hs, direct_breakdown, entrywise_oracle,
                              hs_refined_lower, hs_refined_upper, hs_verdicts, route_discrepancy)
from meanforge.linalg import DomainError
from meanforge.scalar import squared_refinements

from . import oracles

weights = st.sampled_from([F(1, 3), F(2, 5), F(1, 4), F(5, 8), F(7, 8), F(3, 7), F(1, 2), F(11, 16)])


def one(a, b, x, nu):
    return HSInstance(np.array([[a]]), np.array([[b]]), np.array([[x]]), nu)


def random_instance(seed, n, nu, cplx=True, cond=1e3, singular=False):
    rng = np.random.default_rng(seed)
    a = oracles.random_pd(rng, n, cond, cplx)
    b = oracles.random_pd(rng, n, cond, cplx)
    if singular:
        lam, u = np.linalg.eigh(a)
        lam[0] = 0.0
        a = (u * lam) @ u.conj().T
        a = 0.5 * (a + a.conj().T)
    x = rng.standard_normal((n, n)) + (1j * rng.standard_normal((n, n)) if cplx else 0)
    return HSInstance(a, b, x, nu)


def test_breakdown_one_by_one():
    inst = one(4.0, 1.0, 1.0, F(1, 4))
    for br in (direct_breakdown(inst, 2), entrywise_oracle(inst, 2)):
        assert br.mixed_norm_sq == pytest.approx(8.0, rel=1e-15)
        assert br.commutator_norm_sq == 9.0
        assert br.convex_norm_sq == 10.5625
        np.testing.assert_allclose(br.tail_terms, [2.0], rtol=1e-15)


def test_lower_one_by_one_is_equality():
    v = hs_refined_lower(one(4.0, 1.0, 1.0, F(1, 4)), 2)
    assert v.holds and v.equal
    assert v.lhs == pytest.approx(10.5625, rel=1e-15)


def test_upper_one_by_one():
    v = hs_refined_upper(one(4.0, 1.0, 1.0, F(1, 4)), 2)
    assert v.holds
    # 8 + 5.0625 - 0.5: the reverse tail is r_1 (1 - 2)^2.
    assert v.rhs == pytest.approx(12.5625, rel=1e-15)


def test_zero_x():
    inst = HSInstance(np.diag([4.0, 1.0]), np.diag([1.0, 4.0]), np.zeros((2, 2)), F(1, 3))
    lo, up = hs_refined_lower(inst, 10), hs_refined_upper(inst, 10)
    assert lo.margin == 0.0 and up.margin == 0.0
    assert all(v.margin == 0.0 for v in baseline_hs(inst).values())


def test_diagonal_ones_is_sum_of_scalar_instances():
    inst = HSInstance(np.diag([4.0, 1.0]), np.diag([1.0, 4.0]), np.ones((2, 2)), F(1, 4))
    v = hs_refined_lower(inst, 2)
    assert v.holds and abs(v.margin) <= 1e-12 * v.scale
    want = sum(squared_refinements(l, m, F(1, 4), 2).y5.value
               for l in (4.0, 1.0) for m in (1.0, 4.0))
    assert v.lhs == pytest.approx(want, rel=1e-14)


def test_diagonal_identity_x():
    a, b = np.diag([3.0, 0.5, 2.0]), np.diag([1.0, 7.0, 2.0])
    br = entrywise_oracle(HSInstance(a, b, np.eye(3), F(2, 5)), 12)
    pairs = [(3.0, 1.0), (0.5, 7.0), (2.0, 2.0)]
    assert br.convex_norm_sq == pytest.approx(sum((0.6 * l + 0.4 * m) ** 2 for l, m in pairs), rel=1e-15)
    assert br.commutator_norm_sq == pytest.approx(sum((l - m) ** 2 for l, m in pairs), rel=1e-15)


def test_baseline_one_by_one():
    v = baseline_hs(one(4.0, 1.0, 1.0, F(1, 4)))
    assert v["b1-lower"].lhs == pytest.approx(2.5625, rel=1e-15)
    assert v["b1-lower"].rhs == pytest.approx(2.5625, rel=1e-15)
    assert all(x.holds for x in v.values())
    assert set(baseline_hs(one(4.0, 1.0, 1.0, F(3, 4)))) == {"b2-lower", "b2-upper"}


def test_random_examples():
    inst = random_instance(3, 3, F(1, 3))
    assert hs_refined_lower(inst, 40).holds
    assert hs_refined_upper(inst, 40).holds
    assert all(v.holds for v in baseline_hs(inst).values())


def test_rejects_indefinite_and_shape():
    with pytest.raises(DomainError):
        HSInstance(np.diag([1.0, -1.0]), np.eye(2), np.eye(2), F(1, 3))
    with pytest.raises(ValueError):
        HSInstance(np.eye(2), np.eye(2), np.eye(3), F(1, 3))


def test_singular_psd_accepted():
    inst = random_instance(9, 4, F(2, 5), singular=True)
    out, _ = hs_verdicts(inst, 64)
    assert all(v.holds for v in out)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2 ** 32), weights, st.booleans())
def test_routes_agree(n, seed, nu, cplx):
    inst = random_instance(seed, n, nu, cplx)
    d, o = direct_breakdown(inst, 64), entrywise_oracle(inst, 64)
    assert max(route_discrepancy(d, o).values()) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2 ** 32), weights, st.booleans())
def test_all_verdicts_hold(n, seed, nu, cplx):
    out, notes = hs_verdicts(random_instance(seed, n, nu, cplx), 64)
    for v in out:
        assert v.holds, v
    assert set(notes) == {"minus-sign-lower-margin", "minus-sign-upper-margin",
                          "upper-forward-tail-margin"}


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2 ** 32), weights)
def test_unitary_invariance(n, seed, nu):
    inst = random_instance(seed, n, nu)
    rng = np.random.default_rng(seed + 1)
    w, z = oracles.random_unitary(rng, n), oracles.random_unitary(rng, n)
    moved = HSInstance(w @ inst.A @ w.conj().T, z @ inst.B @ z.conj().T,
                       w @ inst.X @ z.conj().T, nu)
    a, b = direct_breakdown(inst, 64), direct_breakdown(moved, 64)
    for key in ("mixed_norm_sq", "commutator_norm_sq", "convex_norm_sq"):
        assert getattr(b, key) == pytest.approx(getattr(a, key), rel=1e-10)
    assert np.sum(b.tail_terms) == pytest.approx(np.sum(a.tail_terms), rel=1e-10, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2 ** 32), weights)
def test_depth_monotone_and_dominates_baseline(n, seed, nu):
    inst = random_instance(seed, n, nu)
    values = [hs_refined_lower(inst, d).lhs for d in range(1, 12)]
    scale = hs_refined_lower(inst, 1).scale
    assert all(y >= x - 1e-12 * scale for x, y in zip(values, values[1:]))
    base = baseline_hs(inst)
    tag = "b1" if nu <= F(1, 2) else "b2"
    mixed = direct_breakdown(inst, 1).mixed_norm_sq
    b_lower = mixed + base[f"{tag}-lower"].lhs
    b_upper = mixed + base[f"{tag}-upper"].rhs
    for d in range(2, 12):
        assert hs_refined_lower(inst, d).lhs >= b_lower - 1e-10 * scale
        assert hs_refined_upper(inst, d).rhs <= b_upper + 1e-10 * scale


def test_depth_one_is_weaker_than_baseline():
    # Depth 1 keeps only r_0^2 ||AX - XB||^2 and misses the k = 1 term the
    # baseline carries.
    inst = one(4.0, 1.0, 1.0, F(1, 4))
    base = baseline_hs(inst)["b1-lower"].lhs + 8.0
    assert hs_refined_lower(inst, 1).lhs < base - 1.0
    assert hs_refined_lower(inst, 2).lhs == pytest.approx(base, rel=1e-15)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3), weights, st.integers(1, 64))
def test_one_by_one_matches_scalar(a, b, nu, depth):
    inst = one(a, b, 1.0, nu)
    sq = squared_refinements(a, b, nu, depth)
    lo, up = hs_refined_lower(inst, depth), hs_refined_upper(inst, depth)
    y5, y6 = float(sq.y5.value), float(sq.y6.value)
    assert abs(lo.lhs - y5) <= 4 * np.spacing(y5)
    assert abs(up.rhs - y6) <= 4 * np.spacing(y6)
    assert lo.holds and up.holds


@pytest.mark.parametrize("nu,depth", [(F(1, 4), 2), (F(3, 8), 3), (F(1, 2), 1)])
def test_dyadic_equality(nu, depth):
    inst = random_instance(21, 5, nu)
    v = hs_refined_lower(inst, depth)
    assert abs(v.margin) <= 1e-10 * v.scale
