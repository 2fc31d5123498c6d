"""Numerical checks of the S-transformation of false theta functions.

Rank one runs in an explicit mpmath context.  Rank two uses numpy double
precision lattice sums, which is ample for the 1e-5 residuals targeted here.

Branches: every square root is the principal one (argument in (-pi/2, pi/2]).
Along the integration paths used below the radicands stay off the negative
real axis whenever Re(tau) != 0, so the principal branch is continuous there.
"""

from __future__ import annotations

import cmath
import functools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _numeric
from ._precision import make_context, resolve
from .falsetheta import LatticeData, MuVector, PreconditionError
from .qseries import QExpansion

__all__ = [
    "EvalPoint",
    "TailWarning",
    "QuadratureError",
    "eval_qexpansion",
    "theta_three_halves_imag",
    "eichler_integral_1d",
    "s_transform_1d_residual",
    "dual_cosets",
    "coset_phase",
    "false_theta_2d_value",
    "g_bivariate",
    "g_dual_sum",
    "modular_g_residual",
    "eichler_integral_2d",
    "verify_s_transform_2d",
]

_CUTOFF = 40.0  # drop lattice terms below e^-40 (about 4e-18)
_QUAD_TOL = 1e-9


class TailWarning(UserWarning):
    """A truncated q-series was evaluated where its tail may matter."""


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class EvalPoint:
    tau: complex
    digits: int = 50

    def __post_init__(self):
        if complex(self.tau).imag <= 0:
            raise ValueError("tau must lie in the upper half-plane")

    def require_off_axis(self):
        if complex(self.tau).real == 0:
            raise PreconditionError("this identity needs Re(tau) != 0")


def _sgn(x: float) -> int:
    return (x > 0) - (x < 0)


# -- rank one --------------------------------------------------------------

def eval_qexpansion(s: QExpansion, tau, ctx=None, tail_tol: float = 1e-12):
    """sum coeff * e^(2 pi i (e/D) tau), warning when the dropped tail may exceed ``tail_tol``."""
    ctx = resolve(ctx)
    tau = ctx.mpmathify(tau)
    if ctx.im(tau) <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    total = ctx.fsum(ctx.mpf(Fraction(c).numerator) / Fraction(c).denominator
                     * ctx.exp(2j * ctx.pi * (ctx.mpf(e) / s.denom) * tau)
                     for e, c in s.coeffs.items())
    if s.order != math.inf:
        # crude tail model: coefficients no larger than the largest seen, geometric decay
        biggest = max((abs(float(c)) for _, c in s.items()), default=1.0)
        r = math.exp(-2 * math.pi * float(ctx.im(tau)) / s.denom)
        lead = math.exp(-2 * math.pi * float(ctx.im(tau)) * float(s.order))
        tail = max(biggest, 1.0) * lead / max(1.0 - r, 1e-300)
        if tail > tail_tol:
            warnings.warn(f"dropped tail may reach {tail:.2e} at Im(tau) = "
                          f"{float(ctx.im(tau)):.3g}", TailWarning, stacklevel=2)
    return total


def theta_three_halves_imag(M: int, mu: int, s, ctx=None):
    """sum_{n = mu mod M} n e^(-pi n^2 s / M) for s > 0.

    Small s uses the Poisson-dual form
    -i M^(-1/2) s^(-3/2) sum_j j e^(-pi j^2/(M s)) e^(2 pi i j mu/M),
    so the term count stays bounded on the whole half-line.
    """
    ctx = resolve(ctx)
    s = ctx.mpf(s)
    if s <= 0:
        raise ValueError("s must be positive")
    if s >= 1:
        return _numeric.theta_value(ctx, M, mu, ctx.mpc(0, s), weight=1)
    need = (ctx.dps + 5) * math.log(10)
    J = int(math.sqrt(need * M * float(s) / math.pi)) + 2
    total = ctx.fsum(j * ctx.exp(-ctx.pi * j * j / (M * s)) * ctx.expjpi(ctx.mpf(2 * j * mu) / M)
                     for j in range(-J, J + 1) if j)
    return -1j * total / (ctx.sqrt(M) * s ** ctx.mpf(1.5))


def eichler_integral_1d(M: int, mu: int, tau, ctx=None):
    """(-i/sqrt M) int_0^{i inf} theta3/2(z) / sqrt(-i(z + 1/tau)) dz along z = i s."""
    ctx = resolve(ctx)
    tau = ctx.mpmathify(tau)
    if ctx.re(tau) == 0:
        raise PreconditionError("the integral needs Re(tau) != 0")
    inv = 1 / tau

    def integrand(s):
        if s == 0:
            return ctx.mpc(0)
        return theta_three_halves_imag(M, mu, s, ctx) / ctx.sqrt(-1j * (1j * s + inv)) * 1j

    value, err = ctx.quad(integrand, [0, 1, ctx.inf], error=True)
    if err > _QUAD_TOL:
        raise QuadratureError(f"rank-one quadrature error estimate {ctx.nstr(err, 3)}")
    return -1j / ctx.sqrt(M) * value


def s_transform_1d_residual(M: int, mu: int, tau, ctx=None):
    """|LHS - RHS| of the rank-one S-transformation with its Eichler-integral error term."""
    ctx = resolve(ctx)
    tau = ctx.mpmathify(tau)
    if ctx.re(tau) == 0:
        raise PreconditionError("the identity needs Re(tau) != 0")
    if (2 * mu) % M == 0:
        raise PreconditionError("the false theta vanishes identically when 2 mu = 0 mod M")
    sign = 1 if ctx.re(tau) > 0 else -1
    lhs = _numeric.false_theta_value(ctx, M, mu, -1 / tau)
    dual = ctx.fsum(ctx.expjpi(ctx.mpf(2 * mu * nu) / M) * _numeric.false_theta_value(ctx, M, nu, tau)
                    for nu in range(M))
    lhs += sign * ctx.sqrt(-1j * tau) / ctx.sqrt(M) * dual
    return abs(lhs - eichler_integral_1d(M, mu, tau, ctx))


# -- rank two: cosets ------------------------------------------------------

@functools.lru_cache(maxsize=None)
def dual_cosets(p: int) -> tuple[tuple[int, int], ...]:
    """Integer labels m of L*/L, where nu = (1/2) A^{-1} m and L = 2Z^2.

    Two labels agree modulo L exactly when their nu agree modulo 2Z^2; a
    window of 16 det labels per axis contains every class.
    """
    det = 6 * p - 1
    seen = {}
    for m1 in range(16 * det):
        for m2 in range(16 * det):
            nu = MuVector(p, m1, m2).mu
            key = (nu[0] % 2, nu[1] % 2)
            seen.setdefault(key, (m1, m2))
    reps = tuple(sorted(seen.values()))
    assert len(reps) == 16 * det, "L*/L must have 16 det classes"
    return reps


def coset_phase(p: int, m_nu, m_mu) -> Fraction:
    """B(nu, mu) = m_nu^T A^{-1} m_mu / 4, as an exact rational."""
    (a, b), (c, d) = (3, -2), (-2, 2 * p + 1)   # det * A^{-1}
    x1, x2 = m_nu
    y1, y2 = m_mu
    return Fraction(x1 * (a * y1 + b * y2) + x2 * (c * y1 + d * y2), 4 * (6 * p - 1))


# -- rank two: lattice sums ------------------------------------------------

def _lambda_min(p: int) -> float:
    return LatticeData(p).min_eigenvalue()


def _coset_points(p: int, mu: MuVector, y: float):
    """Points n = 2k + mu with 2 pi y Q(n) below the cutoff (plus a margin)."""
    lam = _lambda_min(p) * 0.999
    radius = math.sqrt((_CUTOFF + 10) / (math.pi * y * lam)) + 1
    mu1, mu2 = (float(v) for v in mu.mu)
    k1 = np.arange(math.floor((-radius - mu1) / 2) - 1, math.ceil((radius - mu1) / 2) + 2)
    k2 = np.arange(math.floor((-radius - mu2) / 2) - 1, math.ceil((radius - mu2) / 2) + 2)
    K1, K2 = np.meshgrid(k1, k2, indexing="ij")
    return (2 * K1 + mu1).ravel(), (2 * K2 + mu2).ravel()


def _quadratic(p: int, n1, n2):
    return (p + 0.5) * n1 * n1 + 2 * n1 * n2 + 1.5 * n2 * n2


def _b_c(lat: LatticeData, n1, n2):
    det = lat.det
    if lat.c_index == 1:
        return math.sqrt(det / 3) * n1
    return math.sqrt(det / (2 * lat.p + 1)) * n2


def _q_c(lat: LatticeData, n1, n2):
    if lat.c_index == 1:
        return (2 * n1 + 3 * n2) ** 2 / 6
    a = 2 * lat.p + 1
    return (a * n1 + 2 * n2) ** 2 / (2 * a)


def _check(lat: LatticeData, mu: MuVector):
    if lat.p != mu.p:
        raise ValueError("lattice and mu vector belong to different p")


def false_theta_2d_value(lat: LatticeData, mu: MuVector, tau: complex) -> complex:
    """sum_{n in L + mu} sgn(B(n, c)) e^(2 pi i tau Q(n)) by direct summation."""
    _check(lat, mu)
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    n1, n2 = _coset_points(lat.p, mu, tau.imag)
    sign = np.sign(n1 if lat.c_index == 1 else n2)
    # exact zero coordinates come out as tiny floats; snap them
    coord = n1 if lat.c_index == 1 else n2
    sign[np.abs(coord) < 1e-12] = 0
    return complex(np.sum(sign * np.exp(2j * np.pi * tau * _quadratic(lat.p, n1, n2))))


def _strip_points(origin, step1, step2, u_form, v_form, U: float, V: float):
    """Points origin + k1 step1 + k2 step2 (k integral) with |u| <= U and |v| <= V.

    u and v are independent linear forms on R^2.  The region is a thin
    slanted parallelogram, so it is scanned row by row in k1 with the exact
    k2 interval on each row instead of through a bounding box.
    """
    o = np.asarray(origin, float)
    a = np.asarray(step1, float)
    b = np.asarray(step2, float)
    fu, fv = np.asarray(u_form, float), np.asarray(v_form, float)
    W = np.array([[fu @ a, fu @ b], [fv @ a, fv @ b]])
    w0 = np.array([fu @ o, fv @ o])
    inv = np.linalg.inv(W)
    k1c = -(inv[0] @ w0)
    span = abs(inv[0, 0]) * U + abs(inv[0, 1]) * V
    k1 = np.arange(math.floor(k1c - span) - 1, math.ceil(k1c + span) + 2)
    lo = np.full(k1.shape, -np.inf)
    hi = np.full(k1.shape, np.inf)
    for (c0, c1, c2), bound in (((w0[0], W[0, 0], W[0, 1]), U), ((w0[1], W[1, 0], W[1, 1]), V)):
        base = c0 + c1 * k1
        if abs(c2) < 1e-300:
            bad = np.abs(base) > bound
            lo[bad], hi[bad] = 1.0, 0.0
            continue
        e1, e2 = (-bound - base) / c2, (bound - base) / c2
        lo = np.maximum(lo, np.minimum(e1, e2))
        hi = np.minimum(hi, np.maximum(e1, e2))
    lo, hi = np.ceil(lo).astype(np.int64), np.floor(hi).astype(np.int64)
    counts = np.maximum(hi - lo + 1, 0)
    rows = np.repeat(k1, counts)
    starts = np.repeat(lo, counts)
    offsets = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    K1, K2 = rows, starts + offsets
    pts = o[:, None] + a[:, None] * K1 + b[:, None] * K2
    return pts[0], pts[1]


def _bivariate_forms(lat: LatticeData):
    """(u, v) with B(n, c) = su * u(n) and Q_c(n) = sv * v(n)^2."""
    det, a = lat.det, 2 * lat.p + 1
    if lat.c_index == 1:
        return (1.0, 0.0), (2.0, 3.0), math.sqrt(det / 3), 1 / 6
    return (0.0, 1.0), (float(a), 2.0), math.sqrt(det / a), 1 / (2 * a)


def _bivariate_bounds(lat: LatticeData, ytau: float, yz: float):
    _, _, su, sv = _bivariate_forms(lat)
    # pi yz B^2 <= cutoff and 2 pi ytau Q_c <= cutoff, with slack for the B factor
    U = math.sqrt((_CUTOFF + 10) / (math.pi * yz)) / su
    V = math.sqrt((_CUTOFF + 10) / (2 * math.pi * ytau * sv))
    return U, V


def _bivariate_terms(lat: LatticeData, n1, n2, tau: complex, z: complex):
    b = _b_c(lat, n1, n2)
    return b * np.exp(1j * np.pi * z * b * b + 2j * np.pi * tau * _q_c(lat, n1, n2))


def g_bivariate(lat: LatticeData, mu: MuVector, tau: complex, z: complex) -> complex:
    """sum_{n in L + mu} B(n, c) e^(pi i z B(n, c)^2) e^(2 pi i tau Q_c(n))."""
    _check(lat, mu)
    tau, z = complex(tau), complex(z)
    if tau.imag <= 0 or z.imag <= 0:
        raise ValueError("tau and z must lie in the upper half-plane")
    u, v, _, _ = _bivariate_forms(lat)
    U, V = _bivariate_bounds(lat, tau.imag, z.imag)
    n1, n2 = _strip_points([float(x) for x in mu.mu], (2, 0), (0, 2), u, v, U, V)
    return complex(np.sum(_bivariate_terms(lat, n1, n2, tau, z)))


def g_dual_sum(lat: LatticeData, mu: MuVector, tau: complex, z: complex) -> complex:
    """sum_{nu in L*/L} e^(2 pi i B(nu, mu)) g_nu(tau, z), summed over L* in one pass.

    The phase is well defined on classes because B(L, mu) lies in Z, so the
    coset sum collapses to a single sum over n = (1/2) A^{-1} j, j in Z^2.
    """
    _check(lat, mu)
    tau, z = complex(tau), complex(z)
    if tau.imag <= 0 or z.imag <= 0:
        raise ValueError("tau and z must lie in the upper half-plane")
    p, det = lat.p, lat.det
    u, v, _, _ = _bivariate_forms(lat)
    U, V = _bivariate_bounds(lat, tau.imag, z.imag)
    # columns of (1/2) A^{-1}
    col1 = (3 / (2 * det), -2 / (2 * det))
    col2 = (-2 / (2 * det), (2 * p + 1) / (2 * det))
    n1, n2 = _strip_points((0.0, 0.0), col1, col2, u, v, U, V)
    mu1, mu2 = (float(x) for x in mu.mu)
    a = 2 * p + 1
    phase = a * n1 * mu1 + 2 * (n1 * mu2 + n2 * mu1) + 3 * n2 * mu2
    terms = np.exp(2j * np.pi * phase) * _bivariate_terms(lat, n1, n2, tau, z)
    return complex(np.sum(terms))


def modular_g_residual(lat: LatticeData, mu: MuVector, tau: complex, z: complex) -> float:
    """|g(-1/tau, -1/z) - prefactor * sum_nu e(B(nu, mu)) g_nu(tau, z)|, with the coset sum explicit."""
    tau, z = complex(tau), complex(z)
    lhs = g_bivariate(lat, mu, -1 / tau, -1 / z)
    pref = -1j * cmath.sqrt(-1j * tau) * cmath.sqrt(-1j * z) ** 3 / (4 * math.sqrt(lat.det))
    total = 0j
    for m in dual_cosets(lat.p):
        phase = coset_phase(lat.p, m, (mu.m1, mu.m2))
        total += cmath.exp(2j * math.pi * float(phase)) * g_bivariate(lat, MuVector(lat.p, *m), tau, z)
    return abs(lhs - pref * total)


# -- rank two: integrals ---------------------------------------------------

def _quad(fn, points, what: str, ctx):
    value, err = ctx.quad(lambda s: ctx.mpmathify(fn(float(s))), points, error=True)
    if err > _QUAD_TOL:
        raise QuadratureError(f"{what}: quadrature error estimate {float(err):.2e}")
    return complex(value)


def _geometric_points(lo: float, hi: float) -> list:
    # breakpoints 1, 2, 4, ... between lo and hi keep each tanh-sinh panel short
    pts = [lo]
    x = 1.0
    while x < hi:
        if x > lo:
            pts.append(x)
        x *= 2
    return pts + [hi]


def _vanishes(fn, s: float, tol: float = 1e-15) -> bool:
    return abs(fn(s)) < tol


# Lattice sums with tiny Im(z) cancel down to a rounding floor near 1e-12, so
# path ends are cut where the integrand is below this instead.
_END_TOL = 1e-10


def eichler_integral_2d(lat: LatticeData, mu: MuVector, tau: complex) -> complex:
    """-i int_tau^{i inf} g(tau, z) / sqrt(-i(z - tau)) dz, which should equal theta~(tau).

    With z = tau + i s^2 the integral becomes 2 int_0^inf g(tau, tau + i s^2) ds.
    """
    c = make_context(15)
    tau = complex(tau)
    fn = lambda s: g_bivariate(lat, mu, tau, tau + 1j * s * s)
    # the integrand is not smaller than e^(-pi s^2 B_min^2); stop once the tail is negligible
    top = 1.0
    while not _vanishes(fn, top):
        top *= 2
    return 2 * _quad(fn, _geometric_points(0.0, top), "rank-two Eichler integral", c)


def _dual_combination(lat: LatticeData, mu: MuVector, tau: complex):
    return lambda z: g_dual_sum(lat, mu, tau, z)


def verify_s_transform_2d(lat: LatticeData, mu: MuVector, tau: complex,
                          corollary: bool = False) -> float:
    """Residual of the rank-two S-transformation (finite path 0 -> tau) or its
    corollary (path 0 -> i inf up the imaginary axis, clear of the cut below tau)."""
    _check(lat, mu)
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    if tau.real == 0:
        raise PreconditionError("the S-transformation needs Re(tau) != 0")
    c = make_context(15)
    sign = _sgn(tau.real)
    front = 1 / (4 * math.sqrt(lat.det))
    F = _dual_combination(lat, mu, tau)
    lhs = false_theta_2d_value(lat, mu, -1 / tau) / (-1j * tau)
    if not corollary:
        # z = tau (1 - s^2): dz / sqrt(-i(z - tau)) = -2 tau / sqrt(i tau) ds, s from 1 to 0
        root = cmath.sqrt(1j * tau)
        fn = lambda s: F(tau * (1 - s * s)) * 2 * tau / root
        # near s = 1 (z -> 0) the combination decays like e^(-c / Im z); start the path
        # where the integrand is already below the tolerance
        top = 0.5
        while not _vanishes(fn, top, _END_TOL):
            top = 1.0 - (1.0 - top) / 2
            if top > 1 - 1e-7:
                raise QuadratureError("integrand does not decay near z = 0")
        integral = _quad(fn, [0.0, top], "rank-two S-transformation", c)
        rhs = -1j * sign * front * integral
        return abs(lhs - rhs)
    dual = 0j
    for m in dual_cosets(lat.p):
        phase = coset_phase(lat.p, m, (mu.m1, mu.m2))
        dual += cmath.exp(2j * math.pi * float(phase)) * false_theta_2d_value(lat, MuVector(lat.p, *m), tau)
    lhs += sign * front * dual
    fn = lambda t: F(1j * t) * 1j / cmath.sqrt(-1j * (1j * t - tau))
    lo = 0.5
    while not _vanishes(fn, lo, _END_TOL):
        lo /= 2
        if lo < 1e-7:
            raise QuadratureError("integrand does not decay near z = 0")
    hi = 1.0
    while not _vanishes(fn, hi):
        hi *= 2
    integral = _quad(fn, _geometric_points(lo, hi), "rank-two corollary", c)
    rhs = -1j * sign * front * integral
    return abs(lhs - rhs)
