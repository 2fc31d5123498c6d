"""Residuals of the S-transformation formulas, rank one and rank two.

Each residual compares a false theta value at -1/tau with the dual false
theta combination at tau plus an Eichler-type integral done by quadrature.
"""

from ftlab import modular
from ftlab._precision import make_context
from ftlab.falsetheta import LatticeData, MuVector

ctx = make_context(30)
for tau in (1 / 3 + 0.2j, -1 / 3 + 0.2j):
    r = modular.s_transform_1d_residual(12, 1, tau, ctx)
    print(f"rank one, M=12, mu=1, tau={tau}: residual {float(r):.2e}")

lat, mu = LatticeData(1, 1), MuVector(1, 1, 1)
print("modular property of g at tau = z = i/2:", f"{modular.modular_g_residual(lat, mu, 0.5j, 0.5j):.2e}")
for tau in (1 / 3 + 0.25j, -1 / 3 + 0.25j):
    for corollary in (False, True):
        label = "corollary path" if corollary else "finite path"
        r = modular.verify_s_transform_2d(lat, mu, tau, corollary=corollary)
        print(f"rank two, p=1, tau={tau}, {label}: residual {r:.2e}")
