"""Truncated formal power series in fractional powers of q.

A :class:`QExpansion` is a finite set of terms ``c * q^(e/D)`` with exact
rational coefficients, together with a truncation order ``O``: every exponent
``>= O`` is unknown.  Exact polynomials carry ``O = inf``.

Series are never divided.  Quotients such as ``1/(q)_n`` are expanded as
products of geometric series, and identities with ``(q)_inf`` or ``eta`` in a
denominator are checked after multiplying through.

Example
-------
>>> q = monomial(1)
>>> (1 + q) * (1 - q)
QExpansion(1 - q^2)
>>> pochhammer(1, INFINITY, order=15).exponents()
[Fraction(0, 1), Fraction(1, 1), Fraction(2, 1), Fraction(5, 1), Fraction(7, 1), Fraction(12, 1)]
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from types import MappingProxyType
from typing import Iterable, Mapping

from . import _dense

__all__ = [
    "INFINITY",
    "QExpansion",
    "monomial",
    "series_arith",
    "from_dense",
    "pochhammer",
    "inverse_pochhammer",
    "partition_series",
    "qbinomial",
    "eta_series",
    "jacobi_triple_check",
    "pentagonal_check",
    "loads",
]

INFINITY = math.inf


def _as_order(order):
    if order == math.inf:
        return math.inf
    if isinstance(order, float):
        raise TypeError("truncation orders must be exact rationals or INFINITY")
    return Fraction(order)


def _norm(c):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _ceil_limit(order, denom):
    """Smallest numerator e with e/denom >= order (None for exact series)."""
    if order == math.inf:
        return None
    return math.ceil(order * denom)


class QExpansion:
    """Immutable truncated series ``sum c_e q^(e/denom) + O(q^order)``."""

    __slots__ = ("denom", "_coeffs", "order")

    def __init__(self, coeffs: Mapping[int, Rational] | None = None, denom: int = 1,
                 order=INFINITY):
        if denom < 1:
            raise ValueError("denom must be a positive integer")
        order = _as_order(order)
        limit = _ceil_limit(order, denom)
        clean = {}
        for e, c in (coeffs or {}).items():
            if c == 0:
                continue
            if limit is not None and e >= limit:
                continue
            clean[int(e)] = _norm(c)
        object.__setattr__(self, "denom", int(denom))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("QExpansion is immutable")

    # -- inspection -----------------------------------------------------
    @property
    def coeffs(self) -> Mapping[int, Rational]:
        return MappingProxyType(self._coeffs)

    def items(self):
        """(exponent, coefficient) pairs sorted by exponent; exponents are Fractions."""
        return [(Fraction(e, self.denom), c) for e, c in sorted(self._coeffs.items())]

    def exponents(self):
        return [e for e, _ in self.items()]

    def coefficient(self, exponent) -> Rational:
        exponent = Fraction(exponent)
        if self.order != math.inf and exponent >= self.order:
            raise ValueError(f"coefficient of q^{exponent} is beyond the truncation order")
        num = exponent * self.denom
        if num.denominator != 1:
            return 0
        return self._coeffs.get(num.numerator, 0)

    def valuation(self):
        """Smallest stored exponent; the order itself for an empty series."""
        if self._coeffs:
            return Fraction(min(self._coeffs), self.denom)
        return self.order

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_integral(self) -> bool:
        """True when all exponents are integers and all coefficients are integers."""
        return all(e % self.denom == 0 and isinstance(c, int) for e, c in self._coeffs.items())

    def __len__(self):
        return len(self._coeffs)

    # -- re-gradings ----------------------------------------------------
    def rescale(self, denom: int) -> "QExpansion":
        if denom % self.denom:
            raise ValueError(f"cannot rescale denominator {self.denom} to {denom}")
        f = denom // self.denom
        return QExpansion({e * f: c for e, c in self._coeffs.items()}, denom, self.order)

    def reduced(self) -> "QExpansion":
        """Same series over the smallest denominator that grades it."""
        g = self.denom
        for e in self._coeffs:
            g = math.gcd(g, e)
            if g == 1:
                break
        if self.order != math.inf:
            o = self.order * self.denom
            if o.denominator == 1:
                g = math.gcd(g, o.numerator) if g else o.numerator
        g = g or self.denom
        return QExpansion({e // g: c for e, c in self._coeffs.items()}, self.denom // g, self.order)

    def truncate(self, order) -> "QExpansion":
        order = _as_order(order)
        return QExpansion(self._coeffs, self.denom, min(self.order, order))

    def shift(self, r) -> "QExpansion":
        """Multiply by the monomial q^r for a rational r (negative allowed)."""
        r = Fraction(r)
        d = math.lcm(self.denom, r.denominator)
        s = self.rescale(d)
        k = int(r * d)
        return QExpansion({e + k: c for e, c in s._coeffs.items()}, d, s.order + r)

    # -- arithmetic -----------------------------------------------------
    @staticmethod
    def _coerce(x):
        if isinstance(x, QExpansion):
            return x
        if isinstance(x, (int, Fraction)):
            return QExpansion({0: x})
        return NotImplemented

    def _align(self, other):
        d = math.lcm(self.denom, other.denom)
        return self.rescale(d), other.rescale(d), d

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, d = self._align(other)
        out = dict(a._coeffs)
        for e, c in b._coeffs.items():
            out[e] = out.get(e, 0) + c
        return QExpansion(out, d, min(a.order, b.order))

    __radd__ = __add__

    def __neg__(self):
        return QExpansion({e: -c for e, c in self._coeffs.items()}, self.denom, self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QExpansion({e: c * other for e, c in self._coeffs.items()}, self.denom, self.order)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, d = self._align(other)
        # A factor with negative valuation eats into the other factor's known range.
        order = min(a.order + min(0, b.valuation()), b.order + min(0, a.valuation()))
        limit = _ceil_limit(order, d)
        bs = sorted(b._coeffs.items())
        out = {}
        for e1, c1 in sorted(a._coeffs.items()):
            for e2, c2 in bs:
                e = e1 + e2
                if limit is not None and e >= limit:
                    break
                out[e] = out.get(e, 0) + c1 * c2
        return QExpansion(out, d, order)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("series inversion is not supported")
        result = QExpansion({0: 1})
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison -----------------------------------------------------
    def _terms(self):
        return {Fraction(e, self.denom): c for e, c in self._coeffs.items()}

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QExpansion({0: other}, order=self.order)
        if not isinstance(other, QExpansion):
            return NotImplemented
        return self.order == other.order and self._terms() == other._terms()

    def __hash__(self):
        return hash((self.order, frozenset(self._terms().items())))

    def difference(self, other, order=None) -> "QExpansion":
        """self - other below the common truncation order (and below ``order``)."""
        d = self - other
        return d if order is None else d.truncate(order)

    def agrees(self, other, order=None) -> bool:
        """Coefficient-wise equality below min(self.order, other.order, order)."""
        return self.difference(other, order).is_zero()

    # -- presentation ---------------------------------------------------
    def __repr__(self):
        return f"QExpansion({self.pretty()})"

    def pretty(self, max_terms: int = 12) -> str:
        parts = []
        for i, (e, c) in enumerate(self.items()):
            if i == max_terms:
                parts.append("...")
                break
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                mono = "q" if e == 1 else f"q^{e}" if e.denominator == 1 else f"q^({e})"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        if not parts:
            text = "0"
        else:
            text = ""
            for i, part in enumerate(parts):
                if part == "...":
                    text += " + ..."
                    continue
                sign, body = part
                if i == 0:
                    text = body if sign == "+" else "-" + body
                else:
                    text += f" {sign} {body}"
        if self.order != math.inf:
            text += f" + O(q^{self.order})"
        return text

    def dumps(self) -> str:
        """Golden-file form: a header line, then ``e/D<TAB>num/den`` per term."""
        order = "inf" if self.order == math.inf else str(self.order)
        lines = [f"order={order} denom={self.denom}"]
        for e, c in sorted(self._coeffs.items()):
            c = Fraction(c)
            lines.append(f"{e}/{self.denom}\t{c.numerator}/{c.denominator}")
        return "\n".join(lines) + "\n"


def loads(text: str) -> QExpansion:
    """Inverse of :meth:`QExpansion.dumps`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = dict(field.split("=") for field in lines[0].split())
    denom = int(header["denom"])
    order = INFINITY if header["order"] == "inf" else Fraction(header["order"])
    coeffs = {}
    for ln in lines[1:]:
        e, c = ln.split("\t")
        num, den = e.split("/")
        if int(den) != denom:
            raise ValueError(f"term {e!r} does not match header denominator {denom}")
        coeffs[int(num)] = Fraction(c)
    return QExpansion(coeffs, denom, order)


def monomial(exponent=1, coeff=1, order=INFINITY) -> QExpansion:
    exponent = Fraction(exponent)
    return QExpansion({exponent.numerator: coeff}, exponent.denominator, order)


def series_arith(a: QExpansion, b: QExpansion, op: str) -> QExpansion:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def from_dense(coeffs: Iterable[int], order=None, denom: int = 1) -> QExpansion:
    """Wrap a dense list c[0..n-1]; the order defaults to n (in units of 1/denom)."""
    coeffs = list(coeffs)
    if order is None:
        order = Fraction(len(coeffs), denom)
    return QExpansion({i: c for i, c in enumerate(coeffs) if c}, denom, order)


def _dense_length(order):
    if order == math.inf:
        raise ValueError("an infinite product needs a finite truncation order")
    return math.ceil(Fraction(order))


def pochhammer(offset: int, count, order=INFINITY) -> QExpansion:
    """(q^offset; q)_count = prod_{k<count} (1 - q^(offset+k)).

    ``count`` may be :data:`INFINITY`, in which case factors with
    ``offset + k >= order`` are dropped.  A finite product containing the
    factor ``1 - q^0`` is the zero series.
    """
    if offset < 0:
        raise ValueError("offset must be non-negative")
    if count == INFINITY:
        if offset == 0:
            raise ValueError("(1; q)_inf vanishes identically; offset must be >= 1")
        n = _dense_length(order)
        return from_dense(_dense.pochhammer(offset, n, n), order)
    if count < 0:
        raise ValueError("count must be non-negative")
    if offset == 0 and count >= 1:
        return QExpansion({}, 1, order)
    if order == INFINITY:
        n = offset * count + count * (count - 1) // 2 + 1
        return from_dense(_dense.pochhammer(offset, count, n), INFINITY)
    n = _dense_length(order)
    return from_dense(_dense.pochhammer(offset, count, n), order)


def inverse_pochhammer(offset: int, count, order) -> QExpansion:
    """1/(q^offset; q)_count expanded as a product of geometric series."""
    if offset < 1:
        raise ValueError("offset must be >= 1")
    n = _dense_length(order)
    if count == INFINITY:
        count = n
    return from_dense(_dense.inverse_pochhammer(offset, count, n), order)


def partition_series(order) -> QExpansion:
    """1/(q)_inf, the partition generating function."""
    return inverse_pochhammer(1, INFINITY, order)


def qbinomial(n: int, k: int, order=INFINITY) -> QExpansion:
    """Gaussian binomial [n choose k]_q as an exact polynomial.

    Computed by the q-Pascal recurrence, so no division occurs.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if k < 0 or k > n:
        return QExpansion({}, 1, order)
    k = min(k, n - k)
    length = k * (n - k) + 1
    # row[j] holds [r choose j] for the current r
    row = [_dense.one(length)]
    for r in range(1, n + 1):
        new = [_dense.one(length)]
        for j in range(1, min(r, k) + 1):
            left = row[j - 1]
            right = _dense.shift(row[j], j, length) if j < len(row) else _dense.zeros(length)
            new.append(_dense.add_into(list(left), right))
        row = new
    return from_dense(row[k], INFINITY).truncate(order)


def eta_series(order) -> QExpansion:
    """q^(1/24) (q; q)_inf, known for exponents below ``order``."""
    order = Fraction(order)
    if order <= 0:
        raise ValueError("order must be positive")
    base = pochhammer(1, INFINITY, order - Fraction(1, 24))
    return base.shift(Fraction(1, 24))


def jacobi_triple_check(order, zeta_power: int, modulus: int | None = None) -> bool:
    """Check Jacobi's triple product after the substitution q -> q^M, zeta -> q^m.

    Both sides become single-variable series:

        sum_n (-1)^n q^(M n(n-1)/2 + m n)
            = (q^M; q^M)_inf (q^m; q^M)_inf (q^(M-m); q^M)_inf.

    ``modulus`` defaults to ``2m + 1``, so ``m = 1`` is Euler's pentagonal
    theorem.  Requires ``0 < m < M``.
    """
    m = zeta_power
    M = 2 * m + 1 if modulus is None else modulus
    if not 0 < m < M:
        raise ValueError("need 0 < zeta_power < modulus")
    n = _dense_length(order)
    lhs = [0] * n
    # exponents are >= M s^2/2 - M|s|, so |s| <= bound covers everything below n
    bound = math.isqrt(2 * n // M + 1) + 4
    for s in range(-bound, bound + 1):
        e = M * s * (s - 1) // 2 + m * s
        if 0 <= e < n:
            lhs[e] += -1 if s % 2 else 1
    rhs = _dense.one(n)
    for start in (M, m, M - m):
        e = start
        while e < n:
            rhs = _dense.mul_one_minus(rhs, e, n)
            e += M
    return lhs == rhs


def pentagonal_check(order) -> bool:
    """(q)_inf against sum_b (-1)^b q^(b(3b-1)/2), as two independent expansions."""
    n = _dense_length(order)
    lhs = _dense.pochhammer(1, n, n)
    rhs = [0] * n
    b = 0
    while b * (3 * b - 1) // 2 < n or b * (3 * b + 1) // 2 < n:
        for e in {b * (3 * b - 1) // 2, b * (3 * b + 1) // 2}:
            if e < n:
                rhs[e] += -1 if b % 2 else 1
        b += 1
    return lhs == rhs
