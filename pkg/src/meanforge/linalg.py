"""Hermitian spectral calculus, Loewner comparisons and the Hilbert-Schmidt norm.

Hermitian matrices are plain ``numpy`` arrays; :func:`as_hermitian` validates
and symmetrizes them before any spectral work.
"""
from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from ._kernels import power_numpy
from .verdict import DEFAULT_TOL, InequalityVerdict

HERMITIAN_TOL = 1e-8
PD_DELTA = 1e-12


class DomainError(ValueError):
    """A matrix function was asked for outside its domain."""


class EigenConvergenceError(np.linalg.LinAlgError):
    pass


class EigenDecomposition(NamedTuple):
    values: np.ndarray   # ascending, real
    vectors: np.ndarray  # unitary, columns are eigenvectors

    def reconstruct(self, values=None) -> np.ndarray:
        lam = self.values if values is None else values
        return (self.vectors * lam) @ self.vectors.conj().T


def hs_norm_sq(m) -> float:
    m = np.asarray(m)
    return float(np.sum(m.real ** 2 + m.imag ** 2)) if np.iscomplexobj(m) else float(np.sum(m * m))


def hs_norm(m) -> float:
    """Hilbert-Schmidt (Frobenius) norm, ``sqrt(sum |m_ij|**2)``."""
    return float(np.sqrt(hs_norm_sq(m)))


def as_hermitian(a, name: str = "matrix") -> np.ndarray:
    """Return ``(A + A*)/2`` after checking A is square and Hermitian to 1e-8 relative."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    if not np.iscomplexobj(a):
        a = a.astype(np.float64)
    skew = hs_norm(a - a.conj().T)
    if skew > HERMITIAN_TOL * (1.0 + hs_norm(a)):
        raise ValueError(f"{name} is not Hermitian (||A - A*|| = {skew:.3e})")
    return 0.5 * (a + a.conj().T)


def eigh(a) -> EigenDecomposition:
    a = as_hermitian(a)
    try:
        values, vectors = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise EigenConvergenceError(f"eigensolver failed to converge: {exc}") from exc
    if a.shape[0] > 1:
        values, vectors = _refine(a, values, vectors)
    return EigenDecomposition(values, vectors)


def _refine(a, values, vectors):
    """One Ogita-Aishima correction step.

    Brings ``V diag(lambda) V*`` back to within a few ulps of ``A``; LAPACK
    alone leaves about ten.  Near-equal eigenvalues only get the
    orthogonality part of the correction.
    """
    vh = vectors.conj().T
    r = np.eye(a.shape[0]) - vh @ vectors
    s = vh @ a @ vectors
    lam = np.real(np.diag(s)) / (1.0 - np.real(np.diag(r)))
    gap = lam[None, :] - lam[:, None]
    off = s - np.diag(np.diag(s))
    delta = 2.0 * (np.linalg.norm(off, 2) + np.linalg.norm(a, 2) * np.linalg.norm(r, 2))
    close = np.abs(gap) <= delta
    with np.errstate(divide="ignore", invalid="ignore"):
        e = np.where(close, 0.5 * r, (s + lam[None, :] * r) / gap)
    new = vectors + vectors @ e
    order = np.argsort(lam, kind="stable")
    lam, new = lam[order], new[:, order]
    n = a.shape[0]
    if (np.abs(new.conj().T @ new - np.eye(n)).max() > 16 * n * np.finfo(float).eps
            or _residual(a, lam, new) > _residual(a, values, vectors)):
        return values, vectors
    return lam, new


def _residual(a, values, vectors):
    return np.abs((vectors * values) @ vectors.conj().T - a).max()


def classify(a, delta: float = PD_DELTA) -> str:
    """One of ``"pd"``, ``"psd"`` or ``"indefinite"``, relative to the largest |eigenvalue|."""
    lam = eigh(a).values
    top = max(float(np.max(np.abs(lam))), np.finfo(float).tiny)
    if lam[0] > delta * top:
        return "pd"
    if lam[0] >= -delta * top:
        return "psd"
    return "indefinite"


def matrix_function(a, f: Callable[[np.ndarray], np.ndarray],
                    decomposition: EigenDecomposition | None = None) -> np.ndarray:
    """``f(A) = V diag(f(lambda)) V*`` for Hermitian A and real ``f``.

    ``f`` receives the eigenvalue array.  Non-finite outputs are treated as
    evaluation outside the domain of ``f``.
    """
    dec = eigh(a) if decomposition is None else decomposition
    with np.errstate(all="ignore"):
        fl = np.asarray(f(dec.values), dtype=np.float64)
    bad = ~np.isfinite(fl)
    if np.any(bad):
        lam = dec.values[np.argmax(bad)]
        raise DomainError(f"function undefined at eigenvalue {lam!r}")
    out = dec.reconstruct(np.broadcast_to(fl, dec.values.shape))
    return 0.5 * (out + out.conj().T)


def clipped_spectrum(dec: EigenDecomposition, t: float, delta: float = PD_DELTA) -> np.ndarray:
    """Eigenvalues with round-off negatives set to 0; raises on genuinely negative ones."""
    lam = dec.values
    top = float(np.max(np.abs(lam))) if lam.size else 0.0
    if lam.size and lam[0] < -delta * top:
        raise DomainError(f"negative eigenvalue {lam[0]!r} for fractional power {t}")
    lam = np.maximum(lam, 0.0)
    if t < 0 and lam.size and lam[0] <= delta * top:
        raise DomainError(f"singular matrix (eigenvalue {lam[0]!r}) for power {t}")
    return lam


def fractional_power(a, t: float, decomposition: EigenDecomposition | None = None) -> np.ndarray:
    """``A**t`` for PSD A (PD when ``t < 0``), with ``0**0 = 1`` and ``0**t = 0``."""
    dec = eigh(a) if decomposition is None else decomposition
    t = float(t)
    lam = clipped_spectrum(dec, t)
    out = dec.reconstruct(power_numpy(lam, t))
    return 0.5 * (out + out.conj().T)


def require_pd(a, name: str = "matrix", delta: float = PD_DELTA) -> np.ndarray:
    a = as_hermitian(a, name)
    lam = np.linalg.eigvalsh(a)
    if not lam[0] > delta * max(abs(lam[-1]), np.finfo(float).tiny):
        raise DomainError(f"{name} is not positive definite (lambda_min = {lam[0]!r})")
    return a


def require_psd(a, name: str = "matrix", delta: float = PD_DELTA) -> np.ndarray:
    a = as_hermitian(a, name)
    lam = np.linalg.eigvalsh(a)
    if lam[0] < -delta * max(float(np.max(np.abs(lam))), np.finfo(float).tiny):
        raise DomainError(f"{name} is not positive semidefinite (lambda_min = {lam[0]!r})")
    return a


def loewner_compare(lower, upper, tol: float = DEFAULT_TOL,
                    name: str = "loewner") -> InequalityVerdict:
    """Check ``lower <= upper`` in the Loewner order.

    margin = lambda_min(upper - lower); scale = spectral norm of ``upper``;
    holds iff margin >= -tol * (1 + scale); equal iff every eigenvalue of the
    difference is within that band.
    """
    lower = np.asarray(lower)
    upper = np.asarray(upper)
    if lower.shape != upper.shape:
        raise ValueError(f"dimension mismatch: {lower.shape} vs {upper.shape}")
    diff = upper - lower
    lam = np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))
    scale = float(np.linalg.norm(upper, 2))
    band = tol * (1.0 + scale)
    margin = float(lam[0])
    spread = float(max(abs(lam[0]), abs(lam[-1])))
    return InequalityVerdict(name, lower, upper, margin, scale, margin >= -band, spread <= band)
