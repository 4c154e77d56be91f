"""Hot loops for dyadic series terms.

Every refinement series in this package reduces to evaluating, for many
nonnegative pairs ``(x, y)`` and many dyadic exponent pairs ``(p, q)``, one
of three brackets built from ``g(x, y, p) = x**(1 - p) * y**p``:

* ``SQRT``:  ``c * (g(x, y, p)**0.5 - g(x, y, q)**0.5)**2``
* ``PLAIN``: ``c * (g(x, y, p) - g(x, y, q))**2``
* ``HEINZ``: ``c * (H_p - 2 H_mid + H_q)`` with ``H_t = (g(x, y, t) + g(y, x, t)) / 2``

``g`` is evaluated through the defining congruence ``h * q**p * h`` with
``h = sqrt(x)`` and ``q = (y / h) / h``, the same arithmetic the matrix code
performs on a 1x1 input.  The endpoints p = 0, p = 1 and the diagonal x = y
are returned exactly, so degenerate pairs give identically zero terms.

Two implementations are kept: a numba ``@njit`` kernel and a pure-numpy
broadcast fallback.  Set ``MEANFORGE_NUMBA=0`` in the environment to force
the numpy path (also used automatically when numba is not importable).
"""
import os

import numpy as np

SQRT = 0
PLAIN = 1
HEINZ = 2

# Column layout of the exponent table passed to the kernels.
LO, LO_C, HI, HI_C, MID, MID_C = range(6)

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and os.environ.get("MEANFORGE_NUMBA", "1") != "0"


def power_numpy(x, t):
    """Elementwise ``x**t`` for ``x >= 0`` with ``0**0 = 1`` and ``0**t = 0`` (t > 0)."""
    x = np.asarray(x, dtype=np.float64)
    t = float(t)
    if t == 0.0:
        return np.ones_like(x)
    if t == 1.0:
        return x.copy()
    if t == 0.5:
        return np.sqrt(x)
    with np.errstate(divide="ignore"):
        return np.power(x, t)


def geo_numpy(x, y, p, p_c, half=False):
    """``x**(1-p) * y**p`` (or its square root when ``half``), broadcasting.

    ``p_c`` is ``1 - p`` rounded from the exact rational.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    p_c = np.asarray(p_c, dtype=np.float64)
    h = np.sqrt(x)
    xs = h if half else x
    ys = np.sqrt(y) if half else y
    e = 0.5 * p if half else p
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / h
        base = inv * y * inv
        q = np.where(e == 0.5, np.sqrt(base), np.power(base, e))
        out = h * q if half else h * q * h
    out = np.where((x == 0.0) | (y == 0.0), 0.0, out)
    out = np.where(x == y, xs, out)
    out = np.where(p_c == 0.0, ys, out)
    return np.where(p == 0.0, xs, out)


def bracket_terms_numpy(x, y, expo, coef, mode):
    x = np.asarray(x, dtype=np.float64)[:, None]
    y = np.asarray(y, dtype=np.float64)[:, None]
    lo, lo_c = expo[:, LO], expo[:, LO_C]
    hi, hi_c = expo[:, HI], expo[:, HI_C]
    if mode == SQRT or mode == PLAIN:
        half = mode == SQRT
        d = geo_numpy(x, y, lo, lo_c, half) - geo_numpy(x, y, hi, hi_c, half)
        return coef * (d * d)
    mid, mid_c = expo[:, MID], expo[:, MID_C]

    def heinz(t, t_c):
        return 0.5 * (geo_numpy(x, y, t, t_c) + geo_numpy(y, x, t, t_c))

    return coef * (heinz(lo, lo_c) - 2.0 * heinz(mid, mid_c) + heinz(hi, hi_c))


if numba is not None:

    @numba.njit(cache=True, inline="always")
    def _geo(x, y, h, base, p, p_c, half):
        """``g`` from the pair data ``h = sqrt(x)``, ``base = (y / h) / h``."""
        if p == 0.0:
            return h if half else x
        if p_c == 0.0:
            return np.sqrt(y) if half else y
        if x == y:
            return h if half else x
        if x == 0.0 or y == 0.0:
            return 0.0
        e = 0.5 * p if half else p
        q = np.sqrt(base) if e == 0.5 else base ** e
        return h * q if half else h * q * h

    @numba.njit(cache=True)
    def _bracket_terms_jit(x, y, expo, coef, mode):
        n = x.shape[0]
        kk = expo.shape[0]
        out = np.empty((n, kk))
        half = mode == 0
        for i in range(n):
            a = x[i]
            b = y[i]
            ha = np.sqrt(a)
            hb = np.sqrt(b)
            # A zero member never reaches the power branch of _geo.
            ia = 1.0 / ha if ha > 0.0 else 0.0
            ib = 1.0 / hb if hb > 0.0 else 0.0
            ab = ia * b * ia
            ba = ib * a * ib
            for k in range(kk):
                lo = expo[k, 0]
                lo_c = expo[k, 1]
                hi = expo[k, 2]
                hi_c = expo[k, 3]
                if mode != 2:
                    d = (_geo(a, b, ha, ab, lo, lo_c, half)
                         - _geo(a, b, ha, ab, hi, hi_c, half))
                    out[i, k] = coef[k] * (d * d)
                else:
                    mid = expo[k, 4]
                    mid_c = expo[k, 5]
                    h_lo = 0.5 * (_geo(a, b, ha, ab, lo, lo_c, False)
                                  + _geo(b, a, hb, ba, lo, lo_c, False))
                    h_mid = 0.5 * (_geo(a, b, ha, ab, mid, mid_c, False)
                                   + _geo(b, a, hb, ba, mid, mid_c, False))
                    h_hi = 0.5 * (_geo(a, b, ha, ab, hi, hi_c, False)
                                  + _geo(b, a, hb, ba, hi, hi_c, False))
                    out[i, k] = coef[k] * (h_lo - 2.0 * h_mid + h_hi)
        return out

    def bracket_terms_numba(x, y, expo, coef, mode):
        return _bracket_terms_jit(
            np.ascontiguousarray(x, dtype=np.float64),
            np.ascontiguousarray(y, dtype=np.float64),
            np.ascontiguousarray(expo, dtype=np.float64),
            np.ascontiguousarray(coef, dtype=np.float64),
            int(mode),
        )

else:  # pragma: no cover
    bracket_terms_numba = None


def bracket_terms(x, y, expo, coef, mode):
    """Series terms for flat pair arrays ``x``, ``y`` of length N.

    ``expo`` is the (K, 6) exponent table from ``DyadicSchedule.exponent_table``
    and ``coef`` the K coefficients.  Returns an (N, K) array.
    """
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    if expo.shape[0] == 0:
        return np.zeros((x.shape[0], 0))
    if USE_NUMBA:
        return bracket_terms_numba(x, y, expo, coef, mode)
    return bracket_terms_numpy(x, y, expo, coef, mode)


def backend():
    return "numba" if USE_NUMBA else "numpy"
