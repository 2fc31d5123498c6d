"""False and ordinary theta functions in ranks one and two, as exact q-series.

Rank one
    false_theta_1d(M, mu)  = sum_{n = mu mod M} sgn(n) q^(n^2/2M)
    theta_1d(M, mu, HALF)  = sum_{n = mu mod M} q^(n^2/2M)
    theta_1d(M, mu, THREE_HALVES) = sum_{n = mu mod M} n q^(n^2/2M)

Rank two
    The form is A = [[2p+1, 2], [2, 3]] on the lattice 2Z^2, and a coset
    mu = (1/2) A^{-1} (m1, m2) of the dual lattice is labelled by the integer
    pair (m1, m2).  The two sign vectors are never stored: the sign of B(n, c1)
    is the sign of n1 and the sign of B(n, c2) is the sign of n2.  Everything
    stays in exact rational arithmetic.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .hecke import HabiroFamily, SeriesVerdict, habiro_series, hecke_double_sum
from .qseries import QExpansion, eta_series

__all__ = [
    "Weight",
    "PeriodicChi",
    "chi_periodic",
    "false_theta_1d",
    "theta_1d",
    "false_theta_1d_capital",
    "theta_1d_capital",
    "phi_tilde",
    "phi_tilde_from_false_thetas",
    "LatticeData",
    "MuVector",
    "PreconditionError",
    "false_theta_2d",
    "false_theta_2d_capital",
    "decomposition_rhs",
    "verify_decomposition",
    "bridge_rhs",
    "verify_hecke_false_bridge",
    "habiro_false_rhs",
    "verify_habiro_false",
]


class Weight(enum.Enum):
    HALF = "1/2"
    THREE_HALVES = "3/2"


class PreconditionError(ValueError):
    """An identity was requested outside the range where it is stated."""


def _residue_range(M: int, mu: int, order):
    """All n = mu mod M with n^2/(2M) < order."""
    if order == math.inf:
        raise ValueError("theta series need a finite order")
    bound = math.isqrt(max(0, math.ceil(2 * M * Fraction(order)))) + 1
    r = mu % M
    start = r - M * ((bound + r) // M + 1)
    n = start
    while n <= bound:
        yield n
        n += M


def false_theta_1d(M: int, mu: int, order) -> QExpansion:
    if M < 1:
        raise ValueError("M must be positive")
    coeffs = {}
    for n in _residue_range(M, mu, order):
        if n:
            coeffs[n * n] = coeffs.get(n * n, 0) + (1 if n > 0 else -1)
    return QExpansion(coeffs, 2 * M, order)


def theta_1d(M: int, mu: int, weight: Weight = Weight.HALF, order=None) -> QExpansion:
    if M < 2 or M % 2:
        raise ValueError("M must be a positive even integer")
    if order is None:
        raise ValueError("order is required")
    coeffs = {}
    for n in _residue_range(M, mu, order):
        c = 1 if weight is Weight.HALF else n
        coeffs[n * n] = coeffs.get(n * n, 0) + c
    return QExpansion(coeffs, 2 * M, order)


def false_theta_1d_capital(M: int, mu: int, order) -> QExpansion:
    """theta~_{M,mu} - theta~_{M,mu+M/2} (M even)."""
    if M % 2:
        raise ValueError("M must be even")
    return false_theta_1d(M, mu, order) - false_theta_1d(M, mu + M // 2, order)


def theta_1d_capital(M: int, mu: int, order) -> QExpansion:
    return theta_1d(M, mu, Weight.HALF, order) - theta_1d(M, mu + M // 2, Weight.HALF, order)


# -- the periodic function chi and Phi~ -----------------------------------

@dataclass(frozen=True)
class PeriodicChi:
    """Odd function on Z/2P with value -e1 e2 e3 at P(1 + sum_j e_j l_j / p_j)."""

    p_vec: tuple
    l_vec: tuple
    values: dict = field(repr=False)

    @property
    def P(self) -> int:
        return math.prod(self.p_vec)

    @property
    def period(self) -> int:
        return 2 * self.P

    def __call__(self, n: int) -> int:
        return self.values.get(n % self.period, 0)

    def residue(self, eps) -> int:
        """The class mu(eps, l) mod 2P for a sign triple eps."""
        P = self.P
        return (P + sum(e * l * (P // pj) for e, l, pj in zip(eps, self.l_vec, self.p_vec))) % (2 * P)

    def signatures(self):
        """(eps, residue) for all eight sign triples, in a fixed order."""
        return [(eps, self.residue(eps)) for eps in itertools.product((1, -1), repeat=3)]


def chi_periodic(p_vec, l_vec) -> PeriodicChi:
    p_vec = tuple(int(x) for x in p_vec)
    l_vec = tuple(int(x) for x in l_vec)
    if len(p_vec) != 3 or len(l_vec) != 3:
        raise ValueError("p_vec and l_vec must be triples")
    if any(x < 1 for x in p_vec):
        raise ValueError("p_vec entries must be positive")
    for a, b in itertools.combinations(p_vec, 2):
        if math.gcd(a, b) != 1:
            raise ValueError(f"p_vec {p_vec} is not pairwise coprime")
    for l, pj in zip(l_vec, p_vec):
        if not 0 < l < pj:
            raise ValueError(f"l = {l} is outside 0 < l < {pj}")
    probe = PeriodicChi(p_vec, l_vec, {})
    values = {}
    for eps, r in probe.signatures():
        if r in values:
            raise ValueError(f"residue {r} is hit by two sign triples")
        values[r] = -eps[0] * eps[1] * eps[2]
    return PeriodicChi(p_vec, l_vec, values)


def phi_tilde(chi: PeriodicChi, order) -> QExpansion:
    """sum_{n >= 0} chi(n) q^(n^2/4P), with denominator 4P."""
    P = chi.P
    bound = math.isqrt(math.ceil(4 * P * Fraction(order))) + 1
    coeffs = {}
    for n in range(bound + 1):
        v = chi(n)
        if v:
            coeffs[n * n] = v
    return QExpansion(coeffs, 4 * P, order)


def phi_tilde_from_false_thetas(chi: PeriodicChi, order) -> QExpansion:
    """The same series as -1/2 sum_eps e1 e2 e3 theta~_{2P, mu(eps)}."""
    total = QExpansion({}, 4 * chi.P, order)
    for eps, r in chi.signatures():
        total = total + false_theta_1d(2 * chi.P, r, order) * (eps[0] * eps[1] * eps[2])
    return total * Fraction(-1, 2)


# -- rank two --------------------------------------------------------------

@dataclass(frozen=True)
class LatticeData:
    """The form A = [[2p+1, 2], [2, 3]] on L = 2Z^2, with a choice of sign vector."""

    p: int
    c_index: int = 1

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be >= 1")
        if self.c_index not in (1, 2):
            raise ValueError("c_index must be 1 or 2")

    @property
    def A(self):
        return ((2 * self.p + 1, 2), (2, 3))

    @property
    def det(self) -> int:
        return 6 * self.p - 1

    @property
    def adjugate(self):
        return ((3, -2), (-2, 2 * self.p + 1))

    def with_c(self, c_index: int) -> "LatticeData":
        return LatticeData(self.p, c_index)

    def Q(self, x) -> Fraction:
        x1, x2 = (Fraction(v) for v in x)
        return Fraction(2 * self.p + 1, 2) * x1 * x1 + 2 * x1 * x2 + Fraction(3, 2) * x2 * x2

    def B(self, x, y) -> Fraction:
        (a, b), (_, d) = self.A
        x1, x2 = (Fraction(v) for v in x)
        y1, y2 = (Fraction(v) for v in y)
        return a * x1 * y1 + b * (x1 * y2 + x2 * y1) + d * x2 * y2

    def sign(self, x) -> int:
        """sgn B(x, c) for the selected c."""
        v = Fraction(x[self.c_index - 1])
        return (v > 0) - (v < 0)

    def b_c_squared(self, x) -> Fraction:
        """B(x, c)^2, which is rational although c is not."""
        x1, x2 = (Fraction(v) for v in x)
        if self.c_index == 1:
            return Fraction(self.det, 3) * x1 * x1
        return Fraction(self.det, 2 * self.p + 1) * x2 * x2

    def q_c(self, x) -> Fraction:
        """Q(x) - B(x, c)^2 / 2."""
        x1, x2 = (Fraction(v) for v in x)
        if self.c_index == 1:
            return (2 * x1 + 3 * x2) ** 2 / 6
        return ((2 * self.p + 1) * x1 + 2 * x2) ** 2 / (2 * (2 * self.p + 1))

    def min_eigenvalue(self) -> float:
        a, d = 2 * self.p + 1, 3
        return ((a + d) - math.sqrt((a - d) ** 2 + 16)) / 2


@dataclass(frozen=True)
class MuVector:
    """The dual-lattice vector (1/2) A^{-1} (m1, m2)."""

    p: int
    m1: int
    m2: int

    @property
    def det(self) -> int:
        return 6 * self.p - 1

    @property
    def mu(self) -> tuple[Fraction, Fraction]:
        d = 2 * self.det
        return (Fraction(3 * self.m1 - 2 * self.m2, d),
                Fraction(-2 * self.m1 + (2 * self.p + 1) * self.m2, d))

    def shifted(self, eps1: int, eps2: int) -> "MuVector":
        """mu + (eps1, eps2); unit vectors correspond to m-shifts (4p+2, 4) and (4, 6)."""
        return MuVector(self.p, self.m1 + eps1 * (4 * self.p + 2) + eps2 * 4,
                        self.m2 + eps1 * 4 + eps2 * 6)

    def norm(self) -> Fraction:
        """Q(mu) = m^T A^{-1} m / 8."""
        m1, m2 = self.m1, self.m2
        return Fraction(3 * m1 * m1 - 4 * m1 * m2 + (2 * self.p + 1) * m2 * m2, 8 * self.det)

    @property
    def odd(self) -> bool:
        return self.m1 % 2 == 1 and self.m2 % 2 == 1


def lattice_points(lat: LatticeData, mu: MuVector, order):
    """Yield (k1, k2, numerator of 8 det Q(2k + mu)) for every point with Q < order."""
    if lat.p != mu.p:
        raise ValueError("lattice and mu vector belong to different p")
    det, p = lat.det, lat.p
    m1, m2 = mu.m1, mu.m2
    const = 3 * m1 * m1 - 4 * m1 * m2 + (2 * p + 1) * m2 * m2
    limit = math.ceil(8 * det * Fraction(order))
    lam = lat.min_eigenvalue() * 0.999
    radius = math.sqrt(2 * float(Fraction(order)) / lam) if order > 0 else 0.0
    mu1, mu2 = (float(x) for x in mu.mu)
    k1_lo, k1_hi = math.floor((-radius - mu1) / 2) - 1, math.ceil((radius - mu1) / 2) + 1
    k2_lo, k2_hi = math.floor((-radius - mu2) / 2) - 1, math.ceil((radius - mu2) / 2) + 1
    for k1 in range(k1_lo, k1_hi + 1):
        for k2 in range(k2_lo, k2_hi + 1):
            quad = (2 * p + 1) * k1 * k1 + 4 * k1 * k2 + 3 * k2 * k2
            e = 16 * det * quad + 8 * det * (k1 * m1 + k2 * m2) + const
            if e < limit:
                yield k1, k2, e


def _coordinate_sign(lat: LatticeData, mu: MuVector, k1: int, k2: int) -> int:
    # sign of n_i for n = 2k + mu, scaled by 2 det to stay integral
    det = lat.det
    if lat.c_index == 1:
        v = 4 * det * k1 + 3 * mu.m1 - 2 * mu.m2
    else:
        v = 4 * det * k2 - 2 * mu.m1 + (2 * lat.p + 1) * mu.m2
    return (v > 0) - (v < 0)


def false_theta_2d(lat: LatticeData, mu: MuVector, order) -> QExpansion:
    """sum over n in 2Z^2 + mu of sgn B(n, c) q^Q(n)."""
    coeffs = {}
    for k1, k2, e in lattice_points(lat, mu, order):
        s = _coordinate_sign(lat, mu, k1, k2)
        if s:
            coeffs[e] = coeffs.get(e, 0) + s
    series = QExpansion(coeffs, 8 * lat.det, order)
    if mu.odd:
        assert all(e % 2 == 0 for e in coeffs), "odd (m1, m2) must grade by 1/(4 det)"
        series = QExpansion({e // 2: c for e, c in coeffs.items()}, 4 * lat.det, order)
    return series


def _eps_sum(fn, mu: MuVector):
    total = None
    for e1, e2 in itertools.product((0, 1), repeat=2):
        term = fn(mu.shifted(e1, e2))
        term = term if (e1 + e2) % 2 == 0 else -term
        total = term if total is None else total + term
    return total


def false_theta_2d_capital(lat: LatticeData, mu: MuVector, order) -> QExpansion:
    """sum_{eps in {0,1}^2} (-1)^(eps1+eps2) theta~^(2)_{mu+eps, c}."""
    return _eps_sum(lambda v: false_theta_2d(lat, v, order), mu)


def decomposition_rhs(lat: LatticeData, mu: MuVector, order, capital: bool = False) -> QExpansion:
    """Finite sum of products theta^(1) * theta~^(1) equal to the rank-two false theta."""
    p, det = lat.p, lat.det
    m1, m2 = mu.m1, mu.m2
    th = theta_1d_capital if capital else (lambda M, r, o: theta_1d(M, r, Weight.HALF, o))
    ft = false_theta_1d_capital if capital else false_theta_1d
    if lat.c_index == 1:
        M1, M2, steps = 12, 12 * det, 3
        terms = [(m2 + 4 * j, 3 * m1 - 2 * m2 - 4 * det * j) for j in range(steps)]
    else:
        M1, M2, steps = 4 * (2 * p + 1), 4 * (2 * p + 1) * det, 2 * p + 1
        terms = [(m1 + 4 * j, -2 * m1 + (2 * p + 1) * m2 - 4 * p * det * j) for j in range(steps)]
    total = QExpansion({}, 1, order)
    for r1, r2 in terms:
        total = total + th(M1, r1, order) * ft(M2, r2, order)
    return total


def verify_decomposition(lat: LatticeData, mu: MuVector, c_index: int | None = None,
                         order=8) -> bool:
    """Both the plain and the alternating (capital) decompositions below ``order``."""
    if not mu.odd:
        raise PreconditionError("the decompositions need odd m1 and m2")
    if c_index is not None:
        lat = lat.with_c(c_index)
    plain = false_theta_2d(lat, mu, order).agrees(decomposition_rhs(lat, mu, order))
    capital = false_theta_2d_capital(lat, mu, order).agrees(
        decomposition_rhs(lat, mu, order, capital=True))
    return plain and capital


def _two_sided_sum(p: int, mu: MuVector, order) -> QExpansion:
    lat = LatticeData(p)
    return (false_theta_2d_capital(lat.with_c(1), mu, order)
            + false_theta_2d_capital(lat.with_c(2), mu, order))


def bridge_rhs(p: int, m1: int, m2: int, order) -> QExpansion:
    """(1/2) q^(1/24 - Q(mu)) sum_eps (-1)^(eps1+eps2) (theta~_{c1} + theta~_{c2})."""
    mu = MuVector(p, m1, m2)
    shift = Fraction(1, 24) - mu.norm()
    return _two_sided_sum(p, mu, Fraction(order) - shift).shift(shift) * Fraction(1, 2)


def verify_hecke_false_bridge(p: int, m1: int, m2: int, order, strict: bool = True) -> bool:
    """Hecke double sum times eta against the rank-two false theta combination.

    The identity is stated for mu inside the open unit square; ``strict=False``
    skips that check and simply compares the two series (it still holds for the
    k = 4, 5 family vectors, which sit just outside).
    """
    mu = MuVector(p, m1, m2)
    if strict and not all(0 < x < 1 for x in mu.mu):
        raise PreconditionError(f"mu = {tuple(str(x) for x in mu.mu)} is not inside the open unit square")
    lhs = hecke_double_sum(p, m1, m2, order) * eta_series(order)
    return lhs.agrees(bridge_rhs(p, m1, m2, order), order)


def habiro_false_rhs(p: int, k: int, order) -> QExpansion:
    """(1/2) q^(-e_k/(24(6p-1))) sum_eps (-1)^(eps1+eps2) (theta~_{c1} + theta~_{c2})."""
    fam = HabiroFamily(p, k)
    shift = fam.prefactor_exponent
    mu = MuVector(p, *fam.m)
    return _two_sided_sum(p, mu, Fraction(order) - shift).shift(shift) * Fraction(1, 2)


def verify_habiro_false(p: int, k: int, order) -> SeriesVerdict:
    """eta * H_p^(k) against the false-theta expression; the verdict carries the difference.

    The members (p, k) = (1, 1) and (1, 3) are outside the identity; for them
    the difference is returned for inspection and nothing is asserted.
    """
    lhs = habiro_series(p, k, order) * eta_series(order)
    return SeriesVerdict(lhs.difference(habiro_false_rhs(p, k, order), order))
