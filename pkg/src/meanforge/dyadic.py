"""Exact dyadic coefficient schedules.

For a weight ``0 < nu < 1`` the refinement series are driven by

    m_k = floor(2**k * nu)
    r_0 = min(nu, 1 - nu),   r_k = min(2 r_{k-1}, 1 - 2 r_{k-1})

Everything here is exact rational arithmetic on :class:`fractions.Fraction`;
floats appear only in :meth:`DyadicSchedule.exponent_table`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import NamedTuple, Optional, Union

import numpy as np

DEFAULT_DEPTH = 64

WeightLike = Union[Fraction, int, str]


class ScheduleEntry(NamedTuple):
    k: int
    m: int
    r: Fraction


def parse_weight(value: WeightLike) -> Fraction:
    """Parse ``"p/q"``, a decimal string such as ``"0.25"`` or a Fraction.

    Decimals are converted exactly (``"0.1"`` is ``1/10``).  Floats are
    refused because their binary expansion would silently change the weight.
    """
    if isinstance(value, float):
        raise TypeError("pass the weight as a Fraction or a string, not a float")
    try:
        nu = Fraction(value.strip() if isinstance(value, str) else value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse weight {value!r}") from exc
    if not 0 < nu < 1:
        raise ValueError(f"weight must lie strictly between 0 and 1, got {nu}")
    return nu


def dyadic_exponent(nu: Fraction) -> Optional[int]:
    """Return n if ``nu = t / 2**n`` with t odd, else None."""
    q = nu.denominator
    if q & (q - 1):
        return None
    return q.bit_length() - 1


@dataclass(frozen=True)
class DyadicSchedule:
    nu: Fraction
    entries: tuple[ScheduleEntry, ...]
    termination_index: Optional[int]

    @property
    def depth(self) -> int:
        return len(self.entries)

    @property
    def exact(self) -> bool:
        """True when the series has provably terminated within this depth."""
        return self.termination_index is not None and self.termination_index <= self.depth

    @property
    def m(self) -> list[int]:
        return [e.m for e in self.entries]

    @property
    def r(self) -> list[Fraction]:
        return [e.r for e in self.entries]

    @cached_property
    def coefficients(self) -> np.ndarray:
        return np.array([e.r.numerator / e.r.denominator for e in self.entries], dtype=np.float64)

    @cached_property
    def exponent_table(self) -> np.ndarray:
        """(K, 6) float table: lo, 1-lo, hi, 1-hi, mid, 1-mid per entry.

        lo = m_k/2^k, hi = (m_k+1)/2^k, mid = (2m_k+1)/2^(k+1); each value and
        its complement is rounded once from the exact rational (int / int
        division is correctly rounded).
        """
        rows = []
        for k, m, _ in self.entries:
            den = 1 << k
            rows.append([m / den, (den - m) / den, (m + 1) / den, (den - m - 1) / den,
                         (2 * m + 1) / (2 * den), (2 * den - 2 * m - 1) / (2 * den)])
        return np.array(rows, dtype=np.float64).reshape(len(rows), 6)

    def truncated(self, depth: int) -> "DyadicSchedule":
        if not 1 <= depth <= self.depth:
            raise ValueError(f"depth must be in 1..{self.depth}, got {depth}")
        return DyadicSchedule(self.nu, self.entries[:depth], self.termination_index)

    def tail(self) -> "DyadicSchedule":
        """Entries with k >= 1 (the part that follows the r_0 term)."""
        return DyadicSchedule(self.nu, self.entries[1:], self.termination_index)


@lru_cache(maxsize=4096)
def _build(nu: Fraction, depth: int) -> DyadicSchedule:
    # r_k = s_k / q stays over the denominator of nu, so integers suffice.
    p, q = nu.numerator, nu.denominator
    s = min(p, q - p)
    entries = []
    for k in range(depth):
        entries.append(ScheduleEntry(k, (p << k) // q, Fraction(s, q)))
        s = min(2 * s, q - 2 * s)
    return DyadicSchedule(nu, tuple(entries), dyadic_exponent(nu))


def make_schedule(nu: WeightLike, depth: int = DEFAULT_DEPTH) -> DyadicSchedule:
    nu = parse_weight(nu)
    if isinstance(depth, bool) or not isinstance(depth, (int, np.integer)) or depth < 1:
        raise ValueError(f"depth must be a positive integer, got {depth!r}")
    return _build(nu, int(depth))


def reflect_schedule(nu: WeightLike, depth: int = DEFAULT_DEPTH) -> DyadicSchedule:
    """Schedule of ``1 - nu``.

    Checks the reflection identity floor(2^k (1-nu)) = 2^k - m_k - 1 at every k
    where 2^k nu is not an integer, and that the r sequences coincide.
    """
    nu = parse_weight(nu)
    own = make_schedule(nu, depth)
    mirror = make_schedule(1 - nu, depth)
    for e, f in zip(own.entries, mirror.entries):
        if (nu * (1 << e.k)).denominator != 1:
            assert f.m == (1 << e.k) - e.m - 1, (e, f)
        assert e.r == f.r, (e, f)
    return mirror


def format_schedule(schedule: DyadicSchedule) -> str:
    lines = [f"nu = {schedule.nu}"]
    if schedule.termination_index is None:
        lines.append("termination_index = none (non-dyadic weight)")
    else:
        lines.append(f"termination_index = {schedule.termination_index}")
    lines.append(f"{'k':>4} {'m_k':>22} {'r_k':>24}")
    for k, m, r in schedule.entries:
        lines.append(f"{k:>4} {m:>22} {str(r):>24}")
    return "\n".join(lines)
