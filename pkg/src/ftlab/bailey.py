"""Bailey pairs, the limiting Bailey lemma, and the two Rogers-Ramanujan chains.

A Bailey pair relative to ``a`` is a pair of sequences with

    beta_n = sum_{k=0}^{n} alpha_k / ((q)_{n-k} (aq)_{n+k}).

Only ``a = 1`` and ``a = q`` occur here, so every term is a power series in
integral powers of q.  Inner loops run on dense integer lists; the results
are handed out as :class:`~ftlab.qseries.QExpansion` values.
"""

from __future__ import annotations

import enum
import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction

from . import _dense
from .qseries import QExpansion, from_dense

log = logging.getLogger(__name__)

__all__ = [
    "Base",
    "BaileyPairFn",
    "unit_bailey_pair",
    "unit_pair",
    "bailey_step",
    "verify_bailey_pair",
    "chain_alpha",
    "chain_beta",
    "chain_pair",
    "chain_numerator",
    "signed_beta",
    "verify_chain_identity",
    "verify_auxiliary",
    "fine_sum_check",
    "verify_rogers_ramanujan",
]


class Base(enum.Enum):
    """The parameter ``a`` of a relative Bailey pair."""

    ONE = 0  # a = 1
    Q = 1    # a = q

    @property
    def a_power(self) -> int:
        return self.value


def _length(order) -> int:
    if order == math.inf:
        raise ValueError("a finite working order is required")
    return max(0, math.ceil(Fraction(order)))


def to_dense(series: QExpansion, n: int) -> list:
    """Dense integer list of an integral series with non-negative exponents."""
    out = [0] * n
    for e, c in series.items():
        if e.denominator != 1 or e < 0:
            raise ValueError("series is not a power series in integral powers of q")
        if e < n:
            out[int(e)] = c
    return out


def _inverse_qq(m, n):
    # 1/(q)_m
    return _dense.inverse_pochhammer(1, m, n)


def _sign(k):
    return -1 if k % 2 else 1


@dataclass(frozen=True)
class BaileyPairFn:
    """Materialized Bailey pair: ``alpha[n]`` and ``beta[n]`` for ``n <= max_n``."""

    base: Base
    alpha: tuple
    beta: tuple
    order: Fraction

    def __post_init__(self):
        if len(self.alpha) != len(self.beta):
            raise ValueError("alpha and beta must have the same length")

    @property
    def max_n(self) -> int:
        return len(self.alpha) - 1


# -- unit pair and the limiting Bailey lemma -------------------------------

def _unit_alpha_dense(base: Base, n: int, length: int) -> list:
    if base is Base.ONE:
        if n == 0:
            return _dense.one(length)
        # (1)_n / (1 - 1) resolves to (q)_{n-1}, so (1 - q^2n)(q)_{n-1}/(q)_n = 1 + q^n
        poly = _dense.zeros(length)
        for e in (0, n):
            if e < length:
                poly[e] += 1
    else:
        poly = [1 if e <= 2 * n else 0 for e in range(length)]
    return [_sign(n) * c for c in _dense.shift(poly, n * (n - 1) // 2, length)]


def unit_bailey_pair(base: Base, n: int, order) -> tuple[QExpansion, QExpansion]:
    """(alpha_n, beta_n) of the unit pair; beta_n is 1 at n = 0 and 0 afterwards.

    For ``a = 1``: alpha_0 = 1 and alpha_n = (-1)^n q^(n(n-1)/2) (1 + q^n).
    For ``a = q``: alpha_n = (-1)^n q^(n(n-1)/2) (1 + q + ... + q^(2n)).
    """
    length = _length(order)
    alpha = from_dense(_unit_alpha_dense(base, n, length), order)
    beta = QExpansion({0: 1} if n == 0 else {}, 1, order)
    return alpha, beta


def unit_pair(base: Base, max_n: int, order) -> BaileyPairFn:
    rows = [unit_bailey_pair(base, n, order) for n in range(max_n + 1)]
    return BaileyPairFn(base, tuple(r[0] for r in rows), tuple(r[1] for r in rows),
                        Fraction(order))


def bailey_step(pair: BaileyPairFn, order=None) -> BaileyPairFn:
    """alpha'_n = a^n q^(n^2) alpha_n,  beta'_n = sum_j a^j q^(j^2) beta_j / (q)_{n-j}."""
    order = pair.order if order is None else min(pair.order, Fraction(order))
    length = _length(order)
    ap = pair.base.a_power
    alpha = [a.shift(ap * n + n * n).truncate(order) for n, a in enumerate(pair.alpha)]
    weighted = [_dense.shift(to_dense(b, length), ap * j + j * j, length)
                for j, b in enumerate(pair.beta)]
    beta = []
    for n in range(pair.max_n + 1):
        acc = _dense.zeros(length)
        for j in range(n + 1):
            if any(weighted[j]):
                _dense.add_into(acc, _dense.mul(weighted[j], _inverse_qq(n - j, length), length))
        beta.append(from_dense(acc, order))
    return BaileyPairFn(pair.base, tuple(alpha), tuple(beta), order)


def _relation_rhs(alpha_dense, base: Base, n: int, length: int) -> list:
    acc = _dense.zeros(length)
    for k in range(n + 1):
        if not any(alpha_dense[k]):
            continue
        denom_inv = _dense.mul(_inverse_qq(n - k, length),
                               _dense.inverse_pochhammer(1 + base.a_power, n + k, length), length)
        _dense.add_into(acc, _dense.mul(alpha_dense[k], denom_inv, length))
    return acc


def verify_bailey_pair(pair: BaileyPairFn, order=None) -> bool:
    """Check the defining relation for every materialized index."""
    order = pair.order if order is None else min(pair.order, Fraction(order))
    length = _length(order)
    alpha_dense = [to_dense(a, length) for a in pair.alpha]
    for n in range(pair.max_n + 1):
        if to_dense(pair.beta[n], length) != _relation_rhs(alpha_dense, pair.base, n, length):
            return False
    return True


# -- the two chains --------------------------------------------------------

def _check_kind(kind, p):
    if kind not in (1, 2):
        raise ValueError("kind must be 1 or 2")
    if p < 1:
        raise ValueError("p must be >= 1")


def _chain_weight(kind):
    return (lambda s: s * s) if kind == 1 else (lambda s: s * (s + 1))


def _chain_alpha_dense(kind, p, n, length):
    if kind == 1:
        exp = _half_int_exponent(2 * p + 1, -1, n)
        poly = _dense.zeros(length)
        for e in (exp, exp + n):
            if e < length:
                poly[e] += _sign(n)
        if n == 0:
            poly[0] -= 1
        return poly
    exp = _half_int_exponent(2 * p + 1, 2 * p - 1, n)
    poly = [1 if e <= 2 * n else 0 for e in range(length)]
    return [_sign(n) * c for c in _dense.shift(poly, exp, length)]


def chain_alpha(kind: int, p: int, n: int, order) -> QExpansion:
    """Closed-form alpha_n of the chain built on the unit pair with a = 1 (kind 1) or a = q (kind 2).

    kind 1: (-1)^n q^((p+1/2)n^2 - n/2) (1 + q^n) - [n = 0]
    kind 2: (-1)^n q^((p+1/2)n^2 + (p-1/2)n) (1 - q^(2n+1)) / (1 - q)
    """
    _check_kind(kind, p)
    return from_dense(_chain_alpha_dense(kind, p, n, _length(order)), order)


def chain_numerator(kind: int, p: int, max_n: int, order) -> list:
    """Dense nested sums (q)_n beta_n for n = 0..max_n."""
    _check_kind(kind, p)
    return _dense.nested_chain_sums(p, _chain_weight(kind), max_n, _length(order))


def chain_beta(kind: int, p: int, n: int, order) -> QExpansion:
    """beta_n as the nested q-binomial sum over n = s_p >= ... >= s_1 >= 0, times 1/(q)_n."""
    length = _length(order)
    num = chain_numerator(kind, p, n, order)[n]
    return from_dense(_dense.mul(num, _inverse_qq(n, length), length), order)


def chain_pair(kind: int, p: int, max_n: int, order) -> BaileyPairFn:
    length = _length(order)
    nums = chain_numerator(kind, p, max_n, order)
    alpha = tuple(chain_alpha(kind, p, n, order) for n in range(max_n + 1))
    beta = tuple(from_dense(_dense.mul(nums[n], _inverse_qq(n, length), length), order)
                 for n in range(max_n + 1))
    return BaileyPairFn(Base.ONE if kind == 1 else Base.Q, alpha, beta, Fraction(order))


def _signed_sum(terms, length):
    """sum over (k, exponent, first, second) of (-1)^k q^exponent / ((q)_first (q)_second)."""
    acc = _dense.zeros(length)
    for k, exp, first, second in terms:
        if exp >= length:
            continue
        t = _dense.shift(_inverse_qq(first, length), exp, length)
        t = _dense.mul(t, _inverse_qq(second, length), length)
        _dense.add_into(acc, t, _sign(k))
    return acc


def _half_int_exponent(two_a, two_b, k):
    """(a k^2 + b k) for half-integers a = two_a/2, b = two_b/2, known to be an integer."""
    v = two_a * k * k + two_b * k
    assert v % 2 == 0
    return v // 2


def signed_beta(kind: int, p: int, n: int, order) -> QExpansion:
    """beta_n as the signed single sum obtained by unfolding the Bailey relation."""
    _check_kind(kind, p)
    length = _length(order)
    if kind == 1:
        terms = [(k, _half_int_exponent(2 * p + 1, -1, k), n - k, n + k) for k in range(-n, n + 1)]
    else:
        terms = [(k, _half_int_exponent(2 * p + 1, 2 * p - 1, k), n - k, n + k + 1)
                 for k in range(-n - 1, n + 1)]
    return from_dense(_signed_sum(terms, length), order)


def verify_chain_identity(kind: int, p: int, n_max: int, order) -> bool:
    """Nested-sum beta_n against the signed single sum for n = 0..n_max."""
    length = _length(order)
    nums = chain_numerator(kind, p, n_max, order)
    for n in range(n_max + 1):
        nested = _dense.mul(nums[n], _inverse_qq(n, length), length)
        if from_dense(nested, order) != signed_beta(kind, p, n, order):
            return False
    return True


def verify_auxiliary(which: int, p: int, n_max: int, order) -> bool:
    """Re-indexed signed sums for (1-q^n) beta^(1), q^n beta^(2) and (1-q^(2n)) beta^(2).

    ``which`` 1 and 3 are checked for 1 <= n <= n_max, ``which`` 2 for 0 <= n <= n_max.
    """
    if which not in (1, 2, 3):
        raise ValueError("which must be 1, 2 or 3")
    kind = 1 if which == 1 else 2
    length = _length(order)
    nums = chain_numerator(kind, p, n_max, order)
    for n in range(0 if which == 2 else 1, n_max + 1):
        beta = _dense.mul(nums[n], _inverse_qq(n, length), length)
        if which == 1:
            lhs = _dense.mul_one_minus(beta, n, length)
            terms = [(k, _half_int_exponent(2 * p + 1, -1, k), n - k, n + k - 1)
                     for k in range(-n + 1, n + 1)]
        elif which == 2:
            lhs = _dense.shift(beta, n, length)
            terms = [(k, _half_int_exponent(2 * p + 1, 2 * p + 1, k), n - k, n + k)
                     for k in range(-n, n + 1)]
        else:
            lhs = _dense.mul_one_minus(beta, 2 * n, length)
            terms = [(k, _half_int_exponent(2 * p + 1, 2 * p - 1, k), n - k, n + k - 1)
                     for k in range(-n + 1, n + 1)]
        if lhs != _signed_sum(terms, length):
            return False
    return True


def fine_sum_check(c: int, order) -> bool:
    """(q)_inf * sum_m q^m [2m+c choose m]_q against sum_k (-1)^k q^(3k^2/2 + (c+3/2)k)."""
    if c < 0:
        raise ValueError("c must be non-negative")
    length = _length(order)
    lhs = _dense.zeros(length)
    for m in range(length):
        _dense.add_into(lhs, _dense.shift(_dense.qbinomial(2 * m + c, m, length - m), m, length))
    lhs = _dense.mul(lhs, _dense.pochhammer(1, length, length), length)
    rhs = _dense.zeros(length)
    k = 0
    while True:
        e = _half_int_exponent(3, 2 * c + 3, k)
        if e >= length:
            break
        rhs[e] += _sign(k)
        k += 1
    return lhs == rhs


def verify_rogers_ramanujan(order) -> bool:
    """Both Rogers-Ramanujan identities, each multiplied through by its product side."""
    start = time.perf_counter()
    length = _length(order)
    ok = True
    for shift_per_j, residues in ((0, (1, 4)), (1, (2, 3))):
        lhs = _dense.zeros(length)
        j = 0
        while j * j + shift_per_j * j < length:
            term = _dense.shift(_inverse_qq(j, length), j * j + shift_per_j * j, length)
            _dense.add_into(lhs, term)
            j += 1
        for r in residues:
            e = r
            while e < length:
                lhs = _dense.mul_one_minus(lhs, e, length)
                e += 5
        ok = ok and lhs == _dense.one(length)
    log.info("Rogers-Ramanujan check to order %s took %.3fs", order, time.perf_counter() - start)
    return ok
