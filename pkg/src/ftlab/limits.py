"""Values at roots of unity and vertical limits of false theta functions.

Three independent kinds of number meet here:

* exact evaluations of the Habiro-type series at q = e^(2 pi i/N), where the
  nested sum terminates (computed in Z[x]/(x^N - 1), then evaluated);
* finite Gauss-type sums that give the limits of false theta functions as
  tau -> 1/N vertically (Lawrence-Zagier L-values at non-positive integers);
* direct numerical evaluations near the root, used as probes.

All floating work runs in an explicit mpmath context (50 digits by default).
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _numeric
from ._precision import resolve
from .falsetheta import PeriodicChi, PreconditionError, chi_periodic
from .hecke import HabiroFamily

__all__ = [
    "Status",
    "ComplexPeriodic",
    "LimitReport",
    "bernoulli_poly",
    "l_value_negative",
    "psi_periodic",
    "false_theta_limit_1d",
    "false_theta_limit_via_l_value",
    "false_theta_vertical_value",
    "richardson_limit",
    "phi_limit",
    "phi_limit_via_false_thetas",
    "habiro_polynomial_at_root",
    "habiro_at_root",
    "theta2_conv_indices",
    "convergent_part_limit",
    "convergent_part_limit_via_theta2",
    "wrt_235",
    "radial_probe_235",
    "half_factor_check",
    "theta_eta_limit_12",
    "gauss_inner_sum",
    "theta_eta_gauss_sum",
    "theta_eta_direct",
    "row_status",
    "main_theorem_table",
    "reports_to_csv",
    "CSV_HEADER",
]


class Status(enum.Enum):
    THEOREM = "THEOREM"
    CONJECTURE = "CONJECTURE"
    EXCLUDED = "EXCLUDED"


# -- Bernoulli polynomials and L-values ------------------------------------

def _bernoulli_numbers(m):
    # B_0..B_m with B_1 = -1/2, from sum_{j<=n} C(n+1, j) B_j = 0
    b = [Fraction(1)]
    for n in range(1, m + 1):
        b.append(-sum(math.comb(n + 1, j) * b[j] for j in range(n)) / (n + 1))
    return b


def bernoulli_poly(m: int, x) -> Fraction:
    """B_m(x) = sum_j C(m, j) B_j x^(m-j), exact."""
    if m < 0:
        raise ValueError("m must be non-negative")
    x = Fraction(x)
    b = _bernoulli_numbers(m)
    return sum(math.comb(m, j) * b[j] * x ** (m - j) for j in range(m + 1))


@dataclass(frozen=True)
class ComplexPeriodic:
    """C(1), ..., C(period) of a periodic function, given at working precision."""

    values: tuple
    ctx: object = field(default=None, compare=False, repr=False)

    @property
    def period(self) -> int:
        return len(self.values)

    def __call__(self, m: int):
        return self.values[(m - 1) % self.period]

    def mean_is_zero(self) -> bool:
        ctx = resolve(self.ctx)
        total = ctx.fsum(self.values)
        return abs(total) <= ctx.mpf(10) ** (-(ctx.dps - 10)) * max(1, self.period)


def _to_mpf(ctx, x: Fraction):
    return ctx.mpf(x.numerator) / x.denominator


def l_value_negative(C: ComplexPeriodic, r: int):
    """L(-r, C) = -(M^r/(r+1)) sum_{m=1}^{M} C(m) B_{r+1}(m/M)."""
    if r < 0:
        raise ValueError("r must be non-negative")
    ctx = resolve(C.ctx)
    if not C.mean_is_zero():
        raise ValueError("L-values at negative integers need a mean-zero periodic function")
    M = C.period
    total = ctx.fsum(C(m) * _to_mpf(ctx, bernoulli_poly(r + 1, Fraction(m, M)))
                     for m in range(1, M + 1))
    return -ctx.mpf(M) ** r / (r + 1) * total


# -- rank-one false theta limits -------------------------------------------

def psi_periodic(M: int, mu: int):
    """psi_{M,mu}(n) = eps when n = eps mu mod M, else 0 (needs 2 mu != 0 mod M)."""
    if (2 * mu) % M == 0:
        raise PreconditionError("the limit formula needs 2 mu != 0 mod M")
    plus, minus = mu % M, (-mu) % M

    def psi(n):
        r = n % M
        return 1 if r == plus else -1 if r == minus else 0
    return psi


def false_theta_limit_1d(M: int, mu: int, N: int, ctx=None):
    """lim_{t->0+} theta~_{M,mu}(1/N + it) = -(1/2MN) sum_{n=1}^{2MN} n psi(n) e^(pi i n^2/MN)."""
    ctx = resolve(ctx)
    psi = psi_periodic(M, mu)
    MN = M * N
    total = ctx.fsum(n * psi(n) * ctx.expjpi(ctx.mpf(n * n) / MN)
                     for n in range(1, 2 * MN + 1) if psi(n))
    return -total / (2 * MN)


def false_theta_limit_via_l_value(M: int, mu: int, N: int, ctx=None):
    """The same limit as L(0, C) for C(n) = psi(n) e^(pi i n^2/MN)."""
    ctx = resolve(ctx)
    psi = psi_periodic(M, mu)
    MN = M * N
    values = tuple(psi(n) * ctx.expjpi(ctx.mpf(n * n) / MN) for n in range(1, 2 * MN + 1))
    return l_value_negative(ComplexPeriodic(values, ctx), 0)


def false_theta_vertical_value(M: int, mu: int, N: int, t, ctx=None):
    """theta~_{M,mu}(1/N + it) by direct summation."""
    ctx = resolve(ctx)
    tau = ctx.mpc(ctx.mpf(1) / N, t)
    return _numeric.false_theta_value(ctx, M, mu, tau)


def richardson_limit(fn, t, ratio=10, levels=1):
    """Extrapolate f(t) = L + a t + b t^2 + ... to t = 0 from f(t), f(t/r), ...

    ``levels = 1`` is (r f(t/r) - f(t)) / (r - 1), which cancels the linear
    term; each extra level samples one more point t/r^j and cancels one more
    power of t.
    """
    table = [fn(t / ratio ** j) for j in range(levels + 1)]
    for lev in range(1, levels + 1):
        w = ratio ** lev
        table = [(w * table[j + 1] - table[j]) / (w - 1) for j in range(len(table) - 1)]
    return table[0]


def phi_limit(chi: PeriodicChi, N: int, ctx=None):
    """lim Phi~(1/N + it) = -(1/2PN) sum_{n=1}^{2PN} n chi(n) e^(pi i n^2/2PN)."""
    ctx = resolve(ctx)
    PN2 = 2 * chi.P * N
    total = ctx.fsum(n * chi(n) * ctx.expjpi(ctx.mpf(n * n) / PN2)
                     for n in range(1, PN2 + 1) if chi(n))
    return -total / PN2


def phi_limit_via_false_thetas(chi: PeriodicChi, N: int, ctx=None):
    """-(1/2) sum_eps e1 e2 e3 lim theta~_{2P, mu(eps)}: eight independent Gauss sums."""
    ctx = resolve(ctx)
    total = ctx.mpc(0)
    for eps, r in chi.signatures():
        total += eps[0] * eps[1] * eps[2] * false_theta_limit_1d(2 * chi.P, r, N, ctx)
    return -total / 2


# -- Habiro series at roots of unity ---------------------------------------

def _cyc_mul(a, b, N):
    out = [0] * N
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[(i + j) % N] += x * y
    return out


def _cyc_monomial(e, N):
    out = [0] * N
    out[e % N] = 1
    return out


def _cyc_add(acc, a):
    for i, x in enumerate(a):
        acc[i] += x
    return acc


def _cyc_lead(k: int, s: int, N: int):
    """Leading factor at q = zeta_N; None once a factor (1 - zeta^(jN)) appears."""
    if k == 1:
        base, lo, hi = s, s + 1, 2 * s + 1
    elif k == 2:
        base, lo, hi = s, s, 2 * s - 1
    elif k == 3:
        base, lo, hi = 2 * s, s + 1, 2 * s
    else:
        base, lo, hi = s, s + 1, 2 * s
    poly = _cyc_monomial(base, N)
    for j in range(lo, hi + 1):
        if j % N == 0:
            return None
        one_minus = [0] * N
        one_minus[0] += 1
        one_minus[j % N] -= 1
        poly = _cyc_mul(poly, one_minus, N)
    return poly


def _first_vanishing_bound(k: int, N: int) -> int:
    # The product over j in [lo(s), hi(s)] contains a multiple of N as soon as
    # hi(s) >= N with lo(s) <= N, or the range is at least N long:
    #   k = 1: hi = 2s+1,  vanishes for s >= (N-1)/2
    #   k = 2: hi = 2s-1,  vanishes for s >= (N+1)/2
    #   k = 3, 4, 5: hi = 2s, vanishes for s >= N/2
    # and every later s vanishes too, because lo(s) <= N <= hi(s) persists
    # until the range length exceeds N.
    if k == 1:
        return max(0, -(-(N - 1) // 2))
    if k == 2:
        return max(1, -(-(N + 1) // 2))
    return max(1, -(-N // 2))


def habiro_polynomial_at_root(p: int, k: int, N: int) -> list:
    """H_p^(k)(zeta_N) as an element of Z[x]/(x^N - 1), coefficient list."""
    HabiroFamily(p, k)
    if N < 1:
        raise ValueError("N must be >= 1")
    stop = _first_vanishing_bound(k, N)
    assert stop <= N + 1
    for s in range(stop, stop + N + 1):
        assert _cyc_lead(k, s, N) is None, "outer term failed to vanish"
    weight = (lambda r: r * r) if k in (2, 5) else (lambda r: r * (r + 1))
    smax = max(stop - 1, 0)
    # q-binomials mod x^N - 1 by q-Pascal; no division needed
    binom = [[_cyc_monomial(0, N)]]
    for n in range(1, smax + 1):
        prev = binom[-1]
        row = [_cyc_monomial(0, N)]
        for r in range(1, n):
            row.append(_cyc_add(list(prev[r - 1]), _cyc_mul(_cyc_monomial(r, N), prev[r], N)))
        row.append(_cyc_monomial(0, N))
        binom.append(row)
    level = [_cyc_monomial(0, N) for _ in range(smax + 1)]
    for _ in range(p - 1):
        level = [
            [sum(col) for col in zip(*[
                _cyc_mul(_cyc_mul(_cyc_monomial(weight(r), N), binom[n][r], N), level[r], N)
                for r in range(n + 1)])]
            for n in range(smax + 1)
        ]
    total = [0] * N
    for s in range(stop):
        lead = _cyc_lead(k, s, N)
        if lead is not None:
            _cyc_add(total, _cyc_mul(lead, level[s], N))
    return total


def habiro_at_root(p: int, k: int, N: int, ctx=None):
    """H_p^(k)(e^(2 pi i/N)), exact in the cyclotomic ring, then evaluated."""
    ctx = resolve(ctx)
    poly = habiro_polynomial_at_root(p, k, N)
    return ctx.fsum(c * ctx.expjpi(ctx.mpf(2 * j) / N) for j, c in enumerate(poly) if c) + ctx.mpc(0)


# -- the convergent part ---------------------------------------------------

_J_TABLE = {1: (0, 1), 3: (2, 1), 5: (2, 0), 7: (1, 0), 9: (1, 2), 11: (0, 2)}


def theta2_conv_indices(m2: int) -> tuple[int, int]:
    """(j1, j2) keyed on m2 mod 12 (m2 odd)."""
    if m2 % 2 == 0:
        raise ValueError("m2 must be odd")
    return _J_TABLE[m2 % 12]


def _family_chi(fam: HabiroFamily) -> PeriodicChi:
    ell = fam.ell
    if not 0 < ell[2] < fam.det:
        raise ValueError(f"l = {ell[2]} outside 0 < l < {fam.det}")
    return chi_periodic((2, 3, fam.det), ell)


def convergent_part_limit(p: int, k: int, N: int, ctx=None):
    """-(1/2) e^(-2 pi i e_k/(24(6p-1)N)) lim Phi~_{(2,3,6p-1)}^{(1,1,l_k)}(1/N + it)."""
    ctx = resolve(ctx)
    fam = HabiroFamily(p, k)
    phase = ctx.expjpi(-2 * ctx.mpf(fam.e) / (24 * fam.det * N))
    return -phase * phi_limit(_family_chi(fam), N, ctx) / 2


def convergent_part_limit_via_theta2(p: int, k: int, N: int, ctx=None):
    """The same limit through the four rank-one false theta limits of the c1 half."""
    ctx = resolve(ctx)
    fam = HabiroFamily(p, k)
    m1, m2 = fam.m
    det = fam.det
    M = 12 * det
    j1, j2 = theta2_conv_indices(m2)
    a1 = 3 * m1 - 2 * m2 - 4 * det * j1
    a2 = 3 * m1 - 2 * m2 - 4 * det * j2
    lim = (false_theta_limit_1d(M, a1, N, ctx) - false_theta_limit_1d(M, a1 + 6 * det, N, ctx)
           - false_theta_limit_1d(M, a2, N, ctx) + false_theta_limit_1d(M, a2 + 6 * det, N, ctx))
    phase = ctx.expjpi(-2 * ctx.mpf(fam.e) / (24 * det * N))
    return phase * lim / 2


# -- Sigma(2,3,5) ----------------------------------------------------------

def wrt_235(N: int, ctx=None):
    """tau_N(Sigma(2,3,5)) solved out of its Gauss-sum expression."""
    if N < 2:
        raise ValueError("N must be >= 2")
    ctx = resolve(ctx)
    pvec = (2, 3, 5)
    total = ctx.mpc(0)
    for n in range(60 * N):
        if n % N == 0:
            continue
        num = ctx.mpc(1)
        for pj in pvec:
            num *= 2j * ctx.sinpi(ctx.mpf(n) / (N * pj))
        den = 2j * ctx.sinpi(ctx.mpf(n) / N)
        total += ctx.expjpi(-ctx.mpf(n * n) / (60 * N)) * num / den
    rhs = ctx.expjpi(ctx.mpf(1) / 4) / (2 * ctx.sqrt(60 * N)) * total
    zeta = ctx.expjpi(ctx.mpf(2) / N)
    lhs_factor = ctx.expjpi(ctx.mpf(2 * 121) / (120 * N)) * (zeta - 1)
    return rhs / lhs_factor


def radial_probe_235(N: int, t, ctx=None, tail=1e-12):
    """H at tau = 1/N + i t (so |q| = e^(-2 pi t)) through H = -q^(-1/120) Phi~_{(2,3,5)}^{(1,1,1)}.

    The Phi~ sum is cut once |q|^(n^2/120) drops below ``tail``.
    """
    ctx = resolve(ctx)
    chi = chi_periodic((2, 3, 5), (1, 1, 1))
    t = ctx.mpf(t)
    tau = ctx.mpc(ctx.mpf(1) / N, t)
    nmax = int(math.sqrt(120 * math.log(1 / tail) / (2 * math.pi * float(t)))) + 1
    total = ctx.mpc(0)
    for n in range(nmax + 1):
        v = chi(n)
        if v:
            total += v * _numeric.qpow(ctx, ctx.mpf(n * n) / 120, tau)
    return -_numeric.qpow(ctx, ctx.mpf(-1) / 120, tau) * total


# -- theta/eta at the cusp -------------------------------------------------

def theta_eta_limit_12(mu: int, N: int = 1) -> int:
    """lim_{t->0} Theta_{12,mu}/eta (1/N + it) for odd mu; independent of N."""
    if mu % 2 == 0:
        raise ValueError("mu must be odd")
    r = mu % 12
    return 1 if r in (1, 11) else -1 if r in (5, 7) else 0


def gauss_inner_sum(p: int, b: int, N: int, ctx=None):
    """sum_{nu=0}^{M/2-1} e^(2 pi i (-N nu^2 + (b-N) nu)/(M/2)) with M = 4(2p+1).

    Shifting nu by 2p+1 multiplies the summand by (-1)^b, so the sum is zero for odd b.
    """
    ctx = resolve(ctx)
    half = 2 * (2 * p + 1)
    return ctx.fsum(ctx.expjpi(2 * ctx.mpf(-N * nu * nu + (b - N) * nu) / half)
                    for nu in range(half)) + ctx.mpc(0)


def theta_eta_gauss_sum(p: int, mu: int, N: int, t, ctx=None):
    """Theta_{4(2p+1),mu}/eta at 1/N + it through the transformed expression at -1/N + i/(N^2 t)."""
    if mu % 2 == 0:
        raise ValueError("mu must be odd")
    ctx = resolve(ctx)
    M = 4 * (2 * p + 1)
    half = M // 2
    t = ctx.mpf(t)
    tau_far = ctx.mpc(-ctx.mpf(1) / N, 1 / (N * N * t))
    eta_far = _numeric.eta_value(ctx, tau_far)
    total = ctx.mpc(0)
    for nu_p in range(half):
        b = 2 * nu_p + mu + 1
        phase = ctx.expjpi(2 * (ctx.mpf(b) / M - ctx.mpf(N) / (2 * M) + ctx.mpf(N) / 24))
        inner = ctx.fsum(ctx.expjpi(2 * ctx.mpf(-N * nu * nu + (b - N) * nu) / half)
                         for nu in range(half))
        if abs(inner) < ctx.mpf(10) ** (-(ctx.dps - 5)):
            continue
        total += phase * inner * _numeric.theta_value(ctx, M, 2 * nu_p + 1, tau_far) / eta_far
    return total / half


def theta_eta_direct(p: int, mu: int, N: int, t, ctx=None):
    """(theta_{M,mu} - theta_{M,mu+M/2}) / eta at 1/N + it by direct summation."""
    ctx = resolve(ctx)
    M = 4 * (2 * p + 1)
    tau = ctx.mpc(ctx.mpf(1) / N, t)
    th = _numeric.theta_value(ctx, M, mu, tau) - _numeric.theta_value(ctx, M, mu + M // 2, tau)
    return th / _numeric.eta_value(ctx, tau)


# -- reports ---------------------------------------------------------------

CSV_HEADER = ["N", "p", "k", "re_value", "im_value", "re_limit", "im_limit", "abs_diff", "status"]


@dataclass(frozen=True)
class LimitReport:
    N: int
    p: int
    k: int
    value_at_root: complex
    convergent_limit: complex
    abs_diff: float
    status: Status
    probes: tuple = ()

    def csv_row(self, digits: int = 17):
        def f(x):
            return f"{float(x):.{digits}g}"
        return [str(self.N), str(self.p), str(self.k),
                f(self.value_at_root.real), f(self.value_at_root.imag),
                f(self.convergent_limit.real), f(self.convergent_limit.imag),
                f"{float(self.abs_diff):.3e}", self.status.value]

    def as_dict(self):
        return {
            "N": self.N, "p": self.p, "k": self.k,
            "value_at_root": [float(self.value_at_root.real), float(self.value_at_root.imag)],
            "convergent_limit": [float(self.convergent_limit.real), float(self.convergent_limit.imag)],
            "abs_diff": float(self.abs_diff),
            "status": self.status.value,
        }


def row_status(p: int, k: int) -> Status:
    """THEOREM for k = 1 (p >= 2) and for (1, 2); p = 1 with k in {1, 3} is outside the identity."""
    if p == 1 and k in (1, 3):
        return Status.EXCLUDED
    if k == 1 or (p, k) == (1, 2):
        return Status.THEOREM
    return Status.CONJECTURE


def _to_complex(x):
    return complex(x)


def limit_report(p: int, k: int, N: int, ctx=None) -> LimitReport:
    ctx = resolve(ctx)
    value = habiro_at_root(p, k, N, ctx)
    limit = convergent_part_limit(p, k, N, ctx)
    return LimitReport(N, p, k, _to_complex(value), _to_complex(limit),
                       float(abs(value - limit)), row_status(p, k))


def half_factor_check(N: int, ctx=None, probe_ts: Sequence = (1e-2, 1e-3, 1e-4)) -> LimitReport:
    """H(zeta_N) against half the limit of the full series, both halves being equal for p = 1.

    ``convergent_limit`` holds (1/2)(2 x convergent part); ``probes`` holds
    (t, H(1/N + i t)) whose values should approach 2 H(zeta_N).
    """
    ctx = resolve(ctx)
    value = habiro_at_root(1, 2, N, ctx)
    half = convergent_part_limit(1, 2, N, ctx)
    full_limit = 2 * half
    probes = tuple((float(t), _to_complex(radial_probe_235(N, t, ctx))) for t in probe_ts)
    return LimitReport(N, 1, 2, _to_complex(value), _to_complex(full_limit / 2),
                       float(abs(value - full_limit / 2)), Status.THEOREM, probes)


def main_theorem_table(p_list, k_list, N_list, ctx=None) -> list[LimitReport]:
    ctx = resolve(ctx)
    return [limit_report(p, k, N, ctx) for N in N_list for p in p_list for k in k_list]


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in reports:
        writer.writerow(r.csv_row())
    return buf.getvalue()
