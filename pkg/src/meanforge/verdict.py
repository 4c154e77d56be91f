from __future__ import annotations

from dataclasses import dataclass
from typing import Any

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class InequalityVerdict:
    """Outcome of checking ``lhs <= rhs``.

    ``lhs``/``rhs`` are floats for scalar and norm inequalities and Hermitian
    arrays for Loewner-order comparisons.  ``margin`` is ``rhs - lhs`` (scalar)
    or ``lambda_min(rhs - lhs)`` (Loewner); ``equal`` flags that the two sides
    agree within tolerance.
    """

    name: str
    lhs: Any
    rhs: Any
    margin: float
    scale: float
    holds: bool
    equal: bool

    def as_row(self) -> dict:
        return {
            "inequality": self.name,
            "margin": float(self.margin),
            "scale": float(self.scale),
            "holds": bool(self.holds),
            "equal": bool(self.equal),
        }


def compare(name: str, lhs: float, rhs: float, scale: float,
            tol: float = DEFAULT_TOL) -> InequalityVerdict:
    """Scalar check of ``lhs <= rhs`` with tolerance ``tol * scale``."""
    lhs = float(lhs)
    rhs = float(rhs)
    margin = rhs - lhs
    slack = tol * float(scale)
    return InequalityVerdict(name, lhs, rhs, margin, float(scale),
                             margin >= -slack, abs(margin) <= slack)


def equality(name: str, lhs: float, rhs: float, scale: float,
             tol: float = DEFAULT_TOL) -> InequalityVerdict:
    """Check that ``lhs == rhs`` within ``tol * scale``; ``holds`` means equal."""
    v = compare(name, lhs, rhs, scale, tol)
    return InequalityVerdict(name, v.lhs, v.rhs, v.margin, v.scale, v.equal, v.equal)
