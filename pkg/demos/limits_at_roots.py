"""Values at q = e^(2 pi i/N) against limits of the convergent part.

The k = 1 rows and the Sigma(2,3,5) row are theorems; other rows are
conjectural and are only shown.  The last block traces the
radial approach of H(q) to twice its value at the root.
"""

from ftlab import limits
from ftlab._precision import make_context

ctx = make_context(40)

print(limits.reports_to_csv(limits.main_theorem_table([1, 2], [1, 2, 4], [1, 2, 3, 5], ctx)))

for N in (2, 3, 5):
    zeta = ctx.expjpi(ctx.mpf(2) / N)
    tau_n = limits.wrt_235(N, ctx)
    print(f"N={N}: tau_N(Sigma(2,3,5)) = {ctx.nstr(tau_n, 12)}, "
          f"1 + zeta(1-zeta) tau_N = {ctx.nstr(1 + zeta * (1 - zeta) * tau_n, 12)}, "
          f"H(zeta) = {ctx.nstr(limits.habiro_at_root(1, 2, N, ctx), 12)}")

report = limits.half_factor_check(3, ctx)
print("H(zeta_3) =", report.value_at_root)
for t, value in report.probes:
    print(f"  t={t:g}: H(1/3 + it) = {value:.6f}   (2 H(zeta_3) = {2 * report.value_at_root:.6f})")
