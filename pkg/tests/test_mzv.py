import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from ftlab import mzv


def test_gamma_examples():
    assert mzv.gamma_term(1, 0) == 1
    assert mzv.gamma_term(3, 0) == Fraction(1, 3)
    assert mzv.gamma_term(2, 1) == Fraction(1, 2) * Fraction(1, 3)


def test_telescoping_example():
    gamma, partial = mzv.telescoping_pair_check(2, 1, 10)
    assert partial + mzv.gamma_term(2, 11) == gamma


def test_telescoping_to_infinity_numerically():
    gamma, partial = mzv.telescoping_pair_check(3, 0, 2000)
    assert gamma == Fraction(1, 3)
    assert abs(float(partial) - 1 / 3) < 1e-6


@pytest.mark.parametrize("m", range(1, 9))
def test_telescoping_closure(m):
    for n in range(0, 9):
        for tail in (1, 2, 7, 50, 200):
            gamma, partial = mzv.telescoping_pair_check(m, n, tail)
            assert partial == gamma - mzv.gamma_term(m, n + tail)


def test_telescoping_rejects():
    with pytest.raises(ValueError):
        mzv.telescoping_pair_check(0, 1, 1)
    with pytest.raises(ValueError):
        mzv.NestedSumSpec(1, 0)


def _brute_nested(p, m, cutoff):
    """Direct sum over strictly decreasing tuples, no recursion shared with the library."""
    import itertools
    total = Fraction(0)
    for tup in itertools.combinations(range(1, cutoff + 1), p):
        top = tup[-1]
        w = Fraction(1, math.prod(tup)) * Fraction(math.factorial(top) * math.factorial(m),
                                                   math.factorial(top + m))
        total += w
    return total


@pytest.mark.parametrize("p,m,cutoff", [(1, 4, 30), (2, 1, 20), (2, 3, 15), (3, 2, 12)])
def test_partial_sum_vs_brute(p, m, cutoff):
    assert mzv.harmonic_partial_sum(p, m, cutoff) == _brute_nested(p, m, cutoff)


def test_harmonic_p1_m1_telescopes():
    for c in (1, 5, 100):
        assert mzv.harmonic_identity_check(1, 1, c) == Fraction(1, c + 1)


def test_harmonic_p1_m4_exact_tail():
    # sum_{s>100} (1/s) 4!/((s+1)...(s+4)) telescopes to the closed gamma tail
    assert mzv.harmonic_identity_check(1, 4, 100) == mzv.gamma_term(4, 100)


def test_harmonic_p2_m1_cutoff_50():
    d50 = mzv.harmonic_identity_check(2, 1, 50)
    d100 = mzv.harmonic_identity_check(2, 1, 100)
    assert d100 < d50
    # the tail is about (ln c + gamma) / c, so ~0.1 here rather than below 1e-2
    assert 0.05 < float(d50) < 0.15


@settings(max_examples=25, deadline=None)
@given(p=st.integers(1, 3), m=st.integers(1, 6), c=st.integers(2, 40), step=st.integers(1, 20))
def test_defect_monotone_and_bounded(p, m, c, step):
    a = mzv.harmonic_identity_check(p, m, c)
    b = mzv.harmonic_identity_check(p, m, c + step)
    assert b <= a
    assert a <= mzv.harmonic_tail_bound(p, m, c)


def test_tail_bound_counterexample_at_cutoff_one():
    assert mzv.harmonic_identity_check(2, 1, 1) == 1
    assert mzv.harmonic_tail_bound(2, 1, 1) == Fraction(1, 2)


@pytest.mark.parametrize("s", [2, 3, 4, 5, 7])
def test_zeta_euler_maclaurin(ctx, s):
    mpmath.mp.dps = 50
    try:
        ref = mpmath.zeta(s)
    finally:
        mpmath.mp.dps = 15
    assert abs(mzv.zeta_euler_maclaurin(s, ctx) - ctx.mpf(ref)) < ctx.mpf(10) ** -45


def test_zeta_needs_s_at_least_two(ctx):
    with pytest.raises(ValueError):
        mzv.zeta_euler_maclaurin(1, ctx)


def test_sum_formula_p1_is_same_series(ctx):
    direct = ctx.fsum(1 / ctx.mpf(s) ** 2 for s in range(1, 301))
    assert abs(mzv.multiple_zeta_21_partial(1, 300, ctx) - direct) < 1e-45


def test_multiple_zeta_partial_vs_exact(ctx):
    exact = sum((Fraction(1, s * s) * sum((Fraction(1, j) for j in range(1, s)), Fraction(0))
                 for s in range(1, 60)), Fraction(0))
    val = mzv.multiple_zeta_21_partial(2, 59, ctx)
    assert abs(val - ctx.mpf(exact.numerator) / exact.denominator) < 1e-45


@pytest.mark.parametrize("p", [2, 3])
def test_sum_formula_decreases_under_doubling(ctx30, p):
    d = [mzv.sum_formula_check(p, c, ctx30) for c in (250, 500, 1000, 2000)]
    assert d[0] > d[1] > d[2] > d[3]


def test_sum_formula_tail_asymptotics(ctx30):
    # zeta(3) - zeta_{<=c}(2,1) ~ (ln c + 1 + gamma) / c; the ratio settles near 1
    for c in (1000, 2000):
        model = (math.log(c) + 1 + 0.5772156649) / c
        assert abs(float(mzv.sum_formula_check(2, c, ctx30)) / model - 1) < 0.05
