import csv
import io
import math
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from ftlab import limits as L
from ftlab.falsetheta import PreconditionError, chi_periodic
from ftlab.hecke import HabiroFamily
from ftlab.limits import ComplexPeriodic, Status


# -- Bernoulli polynomials and L-values ------------------------------------

def test_bernoulli_examples():
    assert L.bernoulli_poly(0, Fraction(2, 7)) == 1
    assert L.bernoulli_poly(1, Fraction(2, 7)) == Fraction(2, 7) - Fraction(1, 2)
    assert L.bernoulli_poly(2, Fraction(1, 3)) == Fraction(-1, 18)


@settings(max_examples=60, deadline=None)
@given(m=st.integers(0, 12), num=st.integers(-20, 20), den=st.integers(1, 15))
def test_bernoulli_vs_sympy(m, num, den):
    x = Fraction(num, den)
    ref = sympy.bernoulli(m, sympy.Rational(num, den))
    if m == 1:
        # sympy >= 1.12 uses B_1 = +1/2 for the number but not for the polynomial
        ref = sympy.Rational(num, den) - sympy.Rational(1, 2)
    assert L.bernoulli_poly(m, x) == Fraction(int(ref.p), int(ref.q))


def test_l_value_alternating(ctx):
    # C = (-1)^(m+1): sum C(m) e^{-mt} = 1/(e^t + 1), and L(-r, C) = (-1)^r f^(r)(0)
    C = ComplexPeriodic((ctx.mpf(1), ctx.mpf(-1)), ctx)
    assert abs(L.l_value_negative(C, 0) - ctx.mpf(1) / 2) < 1e-45
    for r in range(6):
        abel = ctx.diff(lambda t: 1 / (1 + ctx.exp(t)), 0, r) * (-1) ** r
        assert abs(L.l_value_negative(C, r) - abel) < 1e-40


def test_l_value_zero_and_rejection(ctx):
    assert L.l_value_negative(ComplexPeriodic((ctx.mpf(0),) * 5, ctx), 3) == 0
    with pytest.raises(ValueError):
        L.l_value_negative(ComplexPeriodic((ctx.mpf(1), ctx.mpf(0)), ctx), 0)


@pytest.mark.parametrize("M,mu,N", [(5, 1, 1), (7, 3, 2), (12, 5, 3), (20, 7, 1)])
def test_false_limit_via_l_value(ctx, M, mu, N):
    a = L.false_theta_limit_1d(M, mu, N, ctx)
    b = L.false_theta_limit_via_l_value(M, mu, N, ctx)
    assert abs(a - b) < 1e-40


def test_false_limit_formula_at_n1(ctx):
    M, mu = 7, 2
    psi = lambda n: 1 if n % M == mu else -1 if n % M == M - mu else 0
    direct = -sum(n * psi(n) * mpmath.expjpi(mpmath.mpf(n * n) / M) for n in range(1, 2 * M + 1)) / (2 * M)
    assert abs(complex(L.false_theta_limit_1d(M, mu, 1, ctx)) - complex(direct)) < 1e-14


@pytest.mark.parametrize("M", [5, 7, 12, 20])
def test_psi_oddness(ctx, M):
    for mu in range(1, M):
        if (2 * mu) % M == 0:
            continue
        for N in (1, 2, 3):
            a = L.false_theta_limit_1d(M, mu, N, ctx)
            b = L.false_theta_limit_1d(M, M - mu, N, ctx)
            assert abs(a + b) < 1e-45


def test_false_limit_precondition(ctx):
    with pytest.raises(PreconditionError):
        L.false_theta_limit_1d(12, 6, 1, ctx)
    with pytest.raises(PreconditionError):
        L.false_theta_limit_1d(5, 0, 1, ctx)


RICHARDSON_GRID = [(M, mu, N) for M in (5, 7, 12, 20) for mu in (1, 2, 3) for N in (1, 2)
                   if (2 * mu) % M]


@pytest.mark.parametrize("M,mu,N", RICHARDSON_GRID)
def test_false_limit_vs_vertical_richardson(ctx30, M, mu, N):
    fn = lambda t: L.false_theta_vertical_value(M, mu, N, t, ctx30)
    est = L.richardson_limit(fn, ctx30.mpf("1e-3"))
    assert abs(est - L.false_theta_limit_1d(M, mu, N, ctx30)) < 1e-4


def test_richardson_levels():
    f = lambda t: 3 + 2 * t - 7 * t * t + t ** 3
    assert abs(L.richardson_limit(f, 0.1, levels=3) - 3) < 1e-12
    assert abs(L.richardson_limit(f, 0.1, levels=1) - 3) > 1e-4


# -- phi limits --------------------------------------------------------------

@pytest.mark.parametrize("p_vec,l_vec", [((2, 3, 5), (1, 1, 1)), ((2, 3, 11), (1, 1, 2)),
                                         ((2, 3, 7), (1, 2, 3)), ((3, 5, 7), (2, 1, 4))])
@pytest.mark.parametrize("N", [1, 2, 3, 5])
def test_phi_limit_two_routes(ctx, p_vec, l_vec, N):
    chi = chi_periodic(p_vec, l_vec)
    assert abs(L.phi_limit(chi, N, ctx) - L.phi_limit_via_false_thetas(chi, N, ctx)) < 1e-10


def test_phi_limit_235_display(ctx):
    chi = chi_periodic((2, 3, 5), (1, 1, 1))
    for N in (1, 2, 4):
        direct = -ctx.fsum(n * chi(n) * ctx.expjpi(ctx.mpf(n * n) / (60 * N))
                           for n in range(1, 60 * N + 1)) / (60 * N)
        assert abs(L.phi_limit(chi, N, ctx) - direct) < 1e-45


def test_phi_limit_2311_display(ctx):
    # the convergent part of H_2^(2) at N = 1 equals the displayed Gauss sum
    chi = chi_periodic((2, 3, 11), (1, 1, 2))
    N = 1
    display = ctx.expjpi(-ctx.mpf(2) / (264 * N)) / (264 * N) * ctx.fsum(
        n * chi(n) * ctx.expjpi(ctx.mpf(n * n) / (132 * N)) for n in range(1, 132 * N + 1))
    via = -ctx.expjpi(-ctx.mpf(2) / (264 * N)) * L.phi_limit(chi, N, ctx) / 2
    assert abs(via - display) < 1e-40
    assert abs(L.convergent_part_limit(2, 2, N, ctx) - display) < 1e-40


# -- Habiro series at roots of unity ------------------------------------------

def test_habiro_at_root_examples(ctx):
    assert abs(L.habiro_at_root(1, 2, 1, ctx) - 1) < 1e-45
    assert abs(L.habiro_at_root(1, 2, 2, ctx) + 1) < 1e-45


def _brute_at_root(ctx, p, k, N):
    """Direct nested sum at zeta_N, with every outer index up to 2N."""
    import itertools
    z = ctx.expjpi(ctx.mpf(2) / N)
    poch = lambda a, n: ctx.fprod(1 - z ** (a + j) for j in range(n)) if n else ctx.mpc(1)
    qb = lambda n, r: poch(n - r + 1, r) / poch(1, r) if all(abs(1 - z ** j) > 1e-20 for j in range(1, r + 1)) else None
    lead = {1: lambda s: z ** s * poch(s + 1, s + 1), 2: lambda s: z ** s * poch(s, s),
            3: lambda s: z ** (2 * s) * poch(s + 1, s), 4: lambda s: z ** s * poch(s + 1, s),
            5: lambda s: z ** s * poch(s + 1, s)}[k]
    w = (lambda r: r * r) if k in (2, 5) else (lambda r: r * (r + 1))
    total = ctx.mpc(0)
    for top in range(N):
        a = lead(top)
        if abs(a) < 1e-30:
            continue
        for lower in itertools.product(range(top + 1), repeat=p - 1):
            s = lower + (top,)
            if any(s[i] > s[i + 1] for i in range(p - 1)):
                continue
            term = a
            for i in range(p - 1):
                b = qb(s[i + 1], s[i])
                term *= z ** w(s[i]) * b
            total += term
    return total


@pytest.mark.parametrize("p,k,N", [(2, 1, 3), (1, 2, 3), (2, 5, 2), (3, 4, 3), (2, 3, 3), (1, 4, 1)])
def test_habiro_at_root_vs_direct(ctx30, p, k, N):
    # inside the range top < N the q-binomials only involve (1 - z^j) with j < N
    assert abs(L.habiro_at_root(p, k, N, ctx30) - _brute_at_root(ctx30, p, k, N)) < 1e-20


def test_habiro_termination_bound():
    for k in range(1, 6):
        for N in range(1, 13):
            assert L._first_vanishing_bound(k, N) <= N + 1


# -- WRT invariant of Sigma(2,3,5) ---------------------------------------------

@pytest.mark.parametrize("N", range(2, 11))
def test_wrt_235_consistency(ctx, N):
    zeta = ctx.expjpi(ctx.mpf(2) / N)
    lhs = 1 + zeta * (1 - zeta) * L.wrt_235(N, ctx)
    assert abs(lhs - L.habiro_at_root(1, 2, N, ctx)) < 1e-9


def test_wrt_235_at_two(ctx):
    assert abs(L.wrt_235(2, ctx) - 1) < 1e-40
    with pytest.raises(ValueError):
        L.wrt_235(1, ctx)


# -- convergent parts -----------------------------------------------------------

def test_theta2_table():
    assert L.theta2_conv_indices(5) == (2, 0)
    assert L.theta2_conv_indices(17) == (2, 0)
    assert [L.theta2_conv_indices(m) for m in (1, 3, 7, 9, 11)] == [(0, 1), (2, 1), (1, 0), (1, 2), (0, 2)]
    with pytest.raises(ValueError):
        L.theta2_conv_indices(4)


@pytest.mark.parametrize("p,k,N", [(2, 1, 3)] + [(p, k, N) for p in (1, 2, 3) for k in range(1, 6)
                                               for N in (1, 2, 5) if not HabiroFamily(p, k).excluded])
def test_convergent_routes_agree(ctx30, p, k, N):
    a = L.convergent_part_limit(p, k, N, ctx30)
    b = L.convergent_part_limit_via_theta2(p, k, N, ctx30)
    assert abs(a - b) < 1e-10


def test_convergent_235_uses_l_one():
    assert HabiroFamily(1, 2).ell == (1, 1, 1)


@pytest.mark.parametrize("p,N", [(p, N) for p in (2, 3, 4) for N in (1, 2, 3, 5, 7)])
def test_main_theorem_k1(ctx, p, N):
    r = L.limit_report(p, 1, N, ctx)
    assert r.status is Status.THEOREM and r.abs_diff < 1e-8


@pytest.mark.parametrize("N", range(1, 9))
def test_main_theorem_235(ctx, N):
    r = L.limit_report(1, 2, N, ctx)
    assert r.status is Status.THEOREM and r.abs_diff < 1e-8


def test_row_status():
    assert L.row_status(2, 1) is Status.THEOREM
    assert L.row_status(1, 2) is Status.THEOREM
    assert L.row_status(2, 2) is Status.CONJECTURE
    assert L.row_status(1, 1) is Status.EXCLUDED
    assert L.row_status(1, 3) is Status.EXCLUDED


def test_main_theorem_table_rows(ctx30):
    rows = L.main_theorem_table([1, 2], [1, 2], [3, 4, 5], ctx30)
    assert len(rows) == 12
    by_key = {(r.p, r.k, r.N): r for r in rows}
    assert by_key[(2, 1, 5)].status is Status.THEOREM and by_key[(2, 1, 5)].abs_diff < 1e-8
    assert by_key[(2, 2, 3)].status is Status.CONJECTURE
    assert by_key[(1, 2, 4)].status is Status.THEOREM and by_key[(1, 2, 4)].abs_diff < 1e-8
    # conjecture rows are only reported; their differences are finite numbers
    assert all(math.isfinite(r.abs_diff) for r in rows)


def test_csv(ctx30):
    rows = L.main_theorem_table([2], [1], [3], ctx30)
    text = L.reports_to_csv(rows)
    parsed = list(csv.reader(io.StringIO(text)))
    assert parsed[0] == L.CSV_HEADER
    assert parsed[1][:3] == ["3", "2", "1"] and parsed[1][-1] == "THEOREM"
    assert complex(float(parsed[1][3]), float(parsed[1][4])) == pytest.approx(rows[0].value_at_root)


# -- the 1/2 factor ---------------------------------------------------------------

@pytest.mark.parametrize("N", [1, 2, 3])
def test_half_factor(ctx30, N):
    r = L.half_factor_check(N, ctx30)
    assert r.abs_diff < 1e-8
    target = 2 * r.value_at_root
    gaps = [abs(v - target) for _, v in r.probes]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 0.05


def test_half_factor_n1_both_one(ctx30):
    r = L.half_factor_check(1, ctx30, probe_ts=())
    assert r.value_at_root == pytest.approx(1) and r.convergent_limit == pytest.approx(1)


# -- theta / eta --------------------------------------------------------------

def test_theta_eta_limit_12():
    assert L.theta_eta_limit_12(13) == 1
    assert L.theta_eta_limit_12(7) == -1
    assert L.theta_eta_limit_12(3) == 0
    with pytest.raises(ValueError):
        L.theta_eta_limit_12(2)


@pytest.mark.parametrize("mu", [1, 3, 5, 7, 9, 11, 13, -1])
def test_theta_eta_limit_is_n_independent(mu):
    assert len({L.theta_eta_limit_12(mu, N) for N in range(1, 13)}) == 1


@pytest.mark.parametrize("p", [1, 2, 3])
def test_gauss_inner_sum_parity(ctx30, p):
    for N in (1, 2, 3):
        for b in range(1, 20, 2):
            assert abs(L.gauss_inner_sum(p, b, N, ctx30)) < 1e-25


@pytest.mark.parametrize("p,mu,N", [(1, 1, 1), (1, 5, 2), (2, 1, 1), (2, 3, 2), (3, 5, 1)])
def test_theta_eta_transform_matches_direct(ctx30, p, mu, N):
    t = ctx30.mpf("0.05")
    a = L.theta_eta_gauss_sum(p, mu, N, t, ctx30)
    b = L.theta_eta_direct(p, mu, N, t, ctx30)
    assert abs(a - b) < 1e-15 * max(1, abs(b))


@pytest.mark.parametrize("mu", [1, 3, 5, 7, 9, 11])
@pytest.mark.parametrize("N", [1, 2, 3])
def test_theta_eta_p1_reduces_to_closed_form(ctx30, mu, N):
    v = L.theta_eta_gauss_sum(1, mu, N, ctx30.mpf("1e-2"), ctx30)
    assert abs(v - L.theta_eta_limit_12(mu, N)) < 1e-12


@pytest.mark.parametrize("p,mu,N", [(2, 1, 1), (2, 3, 2), (3, 5, 1), (3, 1, 2)])
def test_theta_eta_divergence_exhibit(ctx30, p, mu, N):
    values = [abs(L.theta_eta_gauss_sum(p, mu, N, ctx30.mpf(t), ctx30)) for t in ("1e-2", "1e-3", "1e-4")]
    assert values[0] < values[1] < values[2]
