import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ftlab.hecke import HabiroFamily, habiro_series, hecke_double_sum, hecke_lattice_bound, verify_hecke_expansion
from ftlab.qseries import INFINITY, QExpansion, monomial, partition_series, pochhammer, qbinomial

LEAD = {  # (base exponent, pochhammer offset shift, pochhammer length shift)
    1: (1, 1, 1), 2: (1, 0, 0), 3: (2, 1, 0), 4: (1, 1, 0), 5: (1, 1, 0),
}
SQUARE_WEIGHT = {1: False, 2: True, 3: False, 4: False, 5: True}


def brute_habiro(p, k, order):
    """Nested sum over all nondecreasing tuples, straight from the definition."""
    base, off, extra = LEAD[k]
    total = QExpansion({}, 1, order)
    for s_top in range(order):
        lead = monomial(base * s_top) * pochhammer(s_top + off, s_top + extra)
        if lead.truncate(order).is_zero():
            continue
        for lower in itertools.product(range(s_top + 1), repeat=p - 1):
            s = lower + (s_top,)
            if any(s[i] > s[i + 1] for i in range(p - 1)):
                continue
            term = lead
            for i in range(p - 1):
                w = s[i] ** 2 if SQUARE_WEIGHT[k] else s[i] * (s[i] + 1)
                term = term * monomial(w) * qbinomial(s[i + 1], s[i])
            total = total + term.truncate(order)
    return total


def brute_hecke(p, m1, m2, order, box=30):
    theta = {}
    for a in range(-box, box):
        for b in range(-box, box):
            if (a >= 0) != (b >= 0):
                continue
            e = Fraction((2 * p + 1) * a * a + 4 * a * b + 3 * b * b + m1 * a + m2 * b, 2)
            if e < order:
                sign = (-1) ** ((a + b) % 2) * (1 if a >= 0 else -1)
                theta[e] = theta.get(e, 0) + sign
    out = QExpansion({}, 1, order)
    for e, c in theta.items():
        out = out + monomial(e, c, order)
    return out * partition_series(order)


def test_family_data():
    fam = HabiroFamily(2, 1)
    assert fam.m == (5, 5) and fam.det == 11
    assert HabiroFamily(3, 1).mu == (Fraction(11, 34), Fraction(21, 34))
    for p in range(1, 6):
        for k in range(1, 6):
            fam = HabiroFamily(p, k)
            assert fam.m[0] % 2 == 1 and fam.m[1] % 2 == 1
    with pytest.raises(ValueError):
        HabiroFamily(0, 1)
    with pytest.raises(ValueError):
        HabiroFamily(1, 6)


@pytest.mark.parametrize("p,k", [(p, k) for p in (1, 2, 3) for k in range(1, 6)])
def test_constant_term(p, k):
    assert habiro_series(p, k, 10).coefficient(0) == 1


def test_habiro_235_series():
    # sum q^n (q^n)_n, expanded term by term
    order = 10
    direct = QExpansion({}, 1, order)
    for n in range(order):
        direct = direct + (monomial(n) * pochhammer(n, n)).truncate(order)
    assert habiro_series(1, 2, order) == direct
    assert habiro_series(1, 2, 12) == QExpansion({0: 1, 1: 1, 3: 1, 7: 1, 8: -1}, 1, 12)


def test_brute_force_oracle_p2_k1():
    assert habiro_series(2, 1, 30) == brute_habiro(2, 1, 30)


@pytest.mark.parametrize("p,k", [(p, k) for p in (1, 2, 3) for k in range(1, 6)])
def test_brute_force_oracle_small(p, k):
    assert habiro_series(p, k, 15) == brute_habiro(p, k, 15)


@pytest.mark.parametrize("p,k", [(p, k) for p in range(1, 5) for k in range(1, 6)])
def test_integer_coefficients(p, k):
    s = habiro_series(p, k, 40)
    assert s.denom == 1
    assert all(Fraction(c).denominator == 1 for c in s.coeffs.values())


def test_double_sum_examples():
    assert hecke_double_sum(1, 1, 1, 30) == habiro_series(1, 2, 30)
    assert hecke_double_sum(2, 1, 3, 30) == habiro_series(2, 5, 30)


@pytest.mark.parametrize("p,m1,m2", [(1, 1, 1), (2, 5, 5), (3, 9, 3), (2, 1, 3)])
def test_double_sum_vs_wide_box(p, m1, m2):
    assert hecke_double_sum(p, m1, m2, 25) == brute_hecke(p, m1, m2, 25)
    assert hecke_double_sum(p, m1, m2, 25).coefficient(0) == 1


def test_double_sum_rejects_even():
    with pytest.raises(ValueError):
        hecke_double_sum(1, 2, 1, 10)
    with pytest.raises(ValueError):
        hecke_double_sum(1, 1, 4, 10)


@pytest.mark.parametrize("p,k", [(2, 3), (1, 4), (3, 1)])
def test_verify_examples(p, k):
    v = verify_hecke_expansion(p, k, 60)
    assert v.status == "EQUAL" and bool(v)


@pytest.mark.parametrize("p,k", [(p, k) for p in range(1, 5) for k in range(1, 6)])
def test_all_families_order_60(p, k):
    assert verify_hecke_expansion(p, k, 60).status == "EQUAL"


def test_diff_verdict_reports_difference():
    from ftlab.hecke import SeriesVerdict
    v = SeriesVerdict(habiro_series(2, 1, 20) - habiro_series(2, 4, 20))
    assert v.status == "DIFF" and "DIFF(" in repr(v)


@settings(max_examples=25, deadline=None)
@given(p=st.integers(1, 4), k=st.integers(1, 5), order=st.integers(1, 40))
def test_margin_is_sound(p, k, order):
    m1, m2 = HabiroFamily(p, k).m
    assert hecke_double_sum(p, m1, m2, order) == hecke_double_sum(p, m1, m2, order, margin=7)


@settings(max_examples=50, deadline=None)
@given(p=st.integers(1, 6), m1=st.integers(0, 8), m2=st.integers(0, 8), order=st.integers(0, 80))
def test_bound_covers_every_contributing_point(p, m1, m2, order):
    m1, m2 = 2 * m1 + 1, 2 * m2 + 1
    R = hecke_lattice_bound(p, m1, m2, order, margin=0)
    for a in range(-R - 6, R + 7):
        for b in range(-R - 6, R + 7):
            if max(abs(a), abs(b)) <= R:
                continue
            twice = (2 * p + 1) * a * a + 4 * a * b + 3 * b * b + m1 * a + m2 * b
            assert twice >= 2 * order
