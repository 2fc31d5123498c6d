# Direct numerical evaluation of the rank-one theta series and eta at a point of
# the upper half-plane.  Each series is summed until its terms drop below
# 10^-(dps+5) relative to one; callers pass an explicit mpmath context.

import math


def qpow(ctx, r, tau):
    """e^(2 pi i r tau) for rational or real r."""
    return ctx.exp(2j * ctx.pi * ctx.mpf(r) * tau)


def _term_bound(ctx, M, tau):
    # |q^(n^2/2M)| = exp(-pi n^2 Im(tau)/M) < 10^-(dps+5)
    y = float(ctx.im(tau))
    if y <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    need = (ctx.dps + 5) * math.log(10)
    return int(math.sqrt(need * M / (math.pi * y))) + 2


def _residue_terms(M, mu, bound):
    r = mu % M
    n = r - M * ((bound + r) // M + 1)
    while n <= bound:
        yield n
        n += M


def theta_value(ctx, M, mu, tau, weight=0):
    """sum_{n = mu mod M} n^weight q^(n^2/2M)."""
    total = ctx.mpc(0)
    for n in _residue_terms(M, mu, _term_bound(ctx, M, tau)):
        c = 1 if weight == 0 else n
        if c:
            total += c * qpow(ctx, ctx.mpf(n * n) / (2 * M), tau)
    return total


def false_theta_value(ctx, M, mu, tau):
    total = ctx.mpc(0)
    for n in _residue_terms(M, mu, _term_bound(ctx, M, tau)):
        if n:
            total += (1 if n > 0 else -1) * qpow(ctx, ctx.mpf(n * n) / (2 * M), tau)
    return total


def eta_value(ctx, tau):
    """q^(1/24) prod (1 - q^n), summed through the pentagonal series."""
    q = qpow(ctx, 1, tau)
    y = float(ctx.im(tau))
    need = (ctx.dps + 5) * math.log(10) / (2 * math.pi * y)
    total = ctx.mpc(0)
    b = 0
    while True:
        e1 = b * (3 * b - 1) // 2
        if e1 > need and b > 0:
            break
        s = -1 if b % 2 else 1
        total += s * q ** e1
        if b:
            total += s * q ** (b * (3 * b + 1) // 2)
        b += 1
    return qpow(ctx, ctx.mpf(1) / 24, tau) * total
