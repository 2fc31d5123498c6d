"""Exact telescoping pair with trivial u = v = 1 and the nested harmonic sums it produces.

The pair is gamma_n = (1/m) / C(n+m, m) and delta_n = (1/n) / C(n+m, m), and
summing the resulting identity over m turns zeta(p+1) into zeta(2, 1, ..., 1).
All finite identities are checked in exact rationals; the zeta comparison is
numerical by necessity and uses an Euler-Maclaurin evaluator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ._precision import resolve

__all__ = [
    "NestedSumSpec",
    "gamma_term",
    "delta_term",
    "telescoping_pair_check",
    "nested_harmonic",
    "harmonic_partial_sum",
    "harmonic_identity_check",
    "harmonic_tail_bound",
    "zeta_euler_maclaurin",
    "multiple_zeta_21_partial",
    "sum_formula_check",
]


@dataclass(frozen=True)
class NestedSumSpec:
    p: int
    cutoff: int

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be positive")
        if self.cutoff < 1:
            raise ValueError("cutoff must be positive")


def _inv_binom(n: int, m: int) -> Fraction:
    # n! m! / (n+m)!
    return Fraction(1, math.comb(n + m, m))


def gamma_term(m: int, n: int) -> Fraction:
    return Fraction(1, m) * _inv_binom(n, m)


def delta_term(m: int, k: int) -> Fraction:
    return Fraction(1, k) * _inv_binom(k, m)


def telescoping_pair_check(m: int, n: int, tail: int) -> tuple[Fraction, Fraction]:
    """(gamma_n, sum_{k=n+1}^{n+tail} delta_k).

    The partial sum telescopes to gamma_n - gamma_{n+tail}, which callers can
    compare exactly.
    """
    if m < 1 or n < 0 or tail < 1:
        raise ValueError("need m >= 1, n >= 0, tail >= 1")
    partial = sum((delta_term(m, k) for k in range(n + 1, n + tail + 1)), Fraction(0))
    return gamma_term(m, n), partial


def nested_harmonic(depth: int, N: int) -> list[Fraction]:
    """h[s] = sum_{s > s_depth > ... > s_1 > 0} 1/(s_depth ... s_1) for s = 0..N."""
    h = [Fraction(1)] * (N + 1)     # depth 0: the empty product
    for _ in range(depth):
        nxt = [Fraction(0)] * (N + 1)
        for s in range(1, N + 1):
            nxt[s] = nxt[s - 1] + h[s - 1] / (s - 1) if s > 1 else Fraction(0)
        h = nxt
    return h


def harmonic_partial_sum(p: int, m: int, cutoff: int) -> Fraction:
    """sum over cutoff >= s_p > ... > s_1 > 0 of 1/(s_p ... s_1) * s_p! m!/(s_p + m)!."""
    NestedSumSpec(p, cutoff)
    inner = nested_harmonic(p - 1, cutoff)
    return sum((inner[s] / s * _inv_binom(s, m) for s in range(1, cutoff + 1)), Fraction(0))


def harmonic_identity_check(p: int, m: int, cutoff: int) -> Fraction:
    """|1/m^p - partial nested sum| as an exact rational."""
    return abs(Fraction(1, m ** p) - harmonic_partial_sum(p, m, cutoff))


def harmonic_tail_bound(p: int, m: int, cutoff: int) -> Fraction:
    """H(cutoff)^(p-1) * m! cutoff!/(cutoff+m)! * cutoff: crude, explicit, and exact.

    Not a bound at cutoff = 1 with m = 1 and p >= 2, where the partial sum is
    empty and the defect is 1 against a bound of 1/2.  It holds for every
    sampled case with cutoff >= 2; no proof is attempted.
    """
    H = sum((Fraction(1, j) for j in range(1, cutoff + 1)), Fraction(0))
    return H ** (p - 1) * _inv_binom(cutoff, m) * cutoff


def zeta_euler_maclaurin(s: int, ctx=None, N: int | None = None, terms: int | None = None):
    """zeta(s) for an integer s >= 2 by Euler-Maclaurin summation after N terms.

    The remainder after ``terms`` Bernoulli corrections is below the first
    omitted correction, which is checked against the working precision.
    """
    if s < 2:
        raise ValueError("s must be at least 2")
    ctx = resolve(ctx)
    N = N or max(10, ctx.dps)
    terms = terms or ctx.dps
    total = ctx.fsum(ctx.mpf(n) ** (-s) for n in range(1, N))
    NN = ctx.mpf(N)
    total += NN ** (1 - s) / (s - 1) + NN ** (-s) / 2
    rising = ctx.mpf(s)          # s (s+1) ... (s + 2k - 2)
    for k in range(1, terms + 1):
        b = ctx.bernoulli(2 * k)
        total += b / ctx.factorial(2 * k) * rising * NN ** (-s - 2 * k + 1)
        rising *= (s + 2 * k - 1) * (s + 2 * k)
    return total


def multiple_zeta_21_partial(p: int, cutoff: int, ctx=None):
    """sum_{cutoff >= s_p > ... > s_1 > 0} 1/(s_p^2 s_{p-1} ... s_1) = zeta(2, 1, ..., 1) truncated."""
    ctx = resolve(ctx)
    NestedSumSpec(p, cutoff)
    # floating nested harmonic recursion: h_j(s+1) = h_j(s) + h_{j-1}(s)/s
    h = [ctx.mpf(1)] * (cutoff + 1)
    for _ in range(p - 1):
        nxt = [ctx.mpf(0)] * (cutoff + 1)
        for s in range(2, cutoff + 1):
            nxt[s] = nxt[s - 1] + h[s - 1] / (s - 1)
        h = nxt
    return ctx.fsum(h[s] / (ctx.mpf(s) ** 2) for s in range(1, cutoff + 1))


def sum_formula_check(p: int, cutoff: int, ctx=None):
    """|zeta(p+1) - zeta(2, 1, ..., 1) truncated at s_p <= cutoff|."""
    ctx = resolve(ctx)
    return abs(zeta_euler_maclaurin(p + 1, ctx) - multiple_zeta_21_partial(p, cutoff, ctx))
