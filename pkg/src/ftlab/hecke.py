"""Five families of Habiro-type series and their Hecke-type double sums.

Each series is a nested sum over ``s_p >= ... >= s_1 >= 0`` of a leading
factor in ``s_p`` times a product of weighted q-binomials.  The matching
double sum is

    (1/(q)_inf) (sum_{a,b >= 0} - sum_{a,b < 0}) (-1)^(a+b)
        q^((p+1/2)a^2 + 2ab + (3/2)b^2 + (m1/2)a + (m2/2)b)

for a linear part (m1, m2) that depends on the family index k.  The two
sides come from unrelated code paths, so agreement is a real cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _dense
from .qseries import QExpansion, from_dense

__all__ = [
    "HabiroFamily",
    "SeriesVerdict",
    "habiro_series",
    "hecke_double_sum",
    "hecke_lattice_bound",
    "verify_hecke_expansion",
]

# The inner weight q^{w(s)} on each q-binomial: s(s+1) or s^2.
_WEIGHT_IS_SQUARE = {1: False, 2: True, 3: False, 4: False, 5: True}


@dataclass(frozen=True)
class HabiroFamily:
    """Index data for the family ``k`` at level ``p``."""

    p: int
    k: int

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be >= 1")
        if self.k not in range(1, 6):
            raise ValueError("k must be in 1..5")

    @property
    def det(self) -> int:
        return 6 * self.p - 1

    @property
    def m(self) -> tuple[int, int]:
        p = self.p
        return {1: (2 * p + 1, 5), 2: (1, 1), 3: (2 * p + 3, 3),
                4: (2 * p + 1, 1), 5: (1, 3)}[self.k]

    @property
    def mu(self) -> tuple[Fraction, Fraction]:
        """(1/2) A^{-1} (m1, m2)."""
        m1, m2 = self.m
        d = 2 * self.det
        return Fraction(3 * m1 - 2 * m2, d), Fraction(-2 * m1 + (2 * self.p + 1) * m2, d)

    @property
    def e(self) -> int:
        """Numerator of the prefactor exponent -e/(24(6p-1))."""
        p = self.p
        return {1: (6 * p + 5) ** 2, 2: 1, 3: 36 * p * p + 84 * p + 1,
                4: (6 * p + 1) ** 2, 5: 48 * p + 1}[self.k]

    @property
    def ell(self) -> tuple[int, int, int]:
        """The (1, 1, l) triple of the matching periodic function for (2, 3, 6p-1)."""
        p = self.p
        return 1, 1, {1: 1, 2: p, 3: 2 * p - 1, 4: 2 * p, 5: 3 * p - 1}[self.k]

    @property
    def prefactor_exponent(self) -> Fraction:
        return Fraction(-self.e, 24 * self.det)

    @property
    def excluded(self) -> bool:
        """The two members for which the false-theta expression fails."""
        return self.p == 1 and self.k in (1, 3)


@dataclass(frozen=True)
class SeriesVerdict:
    """EQUAL when ``difference`` vanishes below its order, else DIFF."""

    difference: QExpansion

    @property
    def status(self) -> str:
        return "EQUAL" if self.difference.is_zero() else "DIFF"

    def __bool__(self):
        return self.difference.is_zero()

    def __repr__(self):
        if self:
            return "EQUAL"
        return f"DIFF({self.difference.pretty()})"


def _length(order) -> int:
    return max(0, math.ceil(Fraction(order)))


def _lead(k: int, s: int, n: int) -> list:
    """Leading factor of the family k at outer index s, dense to length n."""
    if k == 1:
        base, offset, count = s, s + 1, s + 1
    elif k == 2:
        base, offset, count = s, s, s
    elif k == 3:
        base, offset, count = 2 * s, s + 1, s
    else:
        base, offset, count = s, s + 1, s
    if base >= n:
        return _dense.zeros(n)
    return _dense.shift(_dense.pochhammer(offset, count, n - base), base, n)


def habiro_series(p: int, k: int, order) -> QExpansion:
    """The Habiro-type series H_p^(k) in Z[[q]], known below ``order``."""
    fam = HabiroFamily(p, k)
    n = _length(order)
    if n == 0:
        return QExpansion({}, 1, order)
    # every outer term carries q^s at least, so s < n suffices
    smax = n - 1
    weight = (lambda s: s * s) if _WEIGHT_IS_SQUARE[fam.k] else (lambda s: s * (s + 1))
    inner = _dense.nested_chain_sums(p, weight, smax, n)
    total = _dense.zeros(n)
    for s in range(smax + 1):
        lead = _lead(k, s, n)
        if any(lead):
            _dense.add_into(total, _dense.mul(lead, inner[s], n))
    return from_dense(total, order)


def hecke_lattice_bound(p: int, m1: int, m2: int, order, margin: int = 2) -> int:
    """Radius R such that every (a, b) with exponent below ``order`` has |a|, |b| <= R.

    The exponent is at least lam r^2 / 2 - L r with lam the smallest
    eigenvalue of A and L = |(m1, m2)| / 2.
    """
    A = np.array([[2 * p + 1, 2], [2, 3]], dtype=float)
    lam = float(np.linalg.eigvalsh(A)[0]) * 0.999
    L = math.hypot(m1, m2) / 2
    o = float(Fraction(order))
    r = (L + math.sqrt(L * L + 2 * lam * max(o, 0.0))) / lam
    return int(math.ceil(r)) + margin


def hecke_double_sum(p: int, m1: int, m2: int, order, margin: int = 2) -> QExpansion:
    """The Hecke-type double sum with linear part (m1, m2), as an integral q-series."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if m1 % 2 == 0 or m2 % 2 == 0:
        raise ValueError("m1 and m2 must be odd")
    n = _length(order)
    R = hecke_lattice_bound(p, m1, m2, order, margin)
    theta = {}
    for a in range(-R, R + 1):
        for b in range(-R, R + 1):
            if (a >= 0) != (b >= 0):
                continue
            twice = (2 * p + 1) * a * a + 4 * a * b + 3 * b * b + m1 * a + m2 * b
            assert twice % 2 == 0, "odd linear part must give integral exponents"
            e = twice // 2
            if e >= n:
                continue
            sign = (-1 if (a + b) % 2 else 1) * (1 if a >= 0 else -1)
            theta[e] = theta.get(e, 0) + sign
    if theta and min(theta) < 0:
        raise ValueError("negative exponents are not expected for this linear part")
    dense = [theta.get(e, 0) for e in range(n)]
    return from_dense(_dense.mul(dense, _dense.inverse_pochhammer(1, n, n), n), order)


def verify_hecke_expansion(p: int, k: int, order) -> SeriesVerdict:
    fam = HabiroFamily(p, k)
    m1, m2 = fam.m
    return SeriesVerdict(habiro_series(p, k, order) - hecke_double_sum(p, m1, m2, order))
