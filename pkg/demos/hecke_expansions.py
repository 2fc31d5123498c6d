"""Nested Habiro-type sums against their Hecke-type double sums.

Prints the first coefficients of each family at level p = 2, confirms the
double-sum expansion to order 60, then shows that multiplying by eta turns
each series into a combination of rank-two false theta functions.
"""

from ftlab.falsetheta import verify_habiro_false
from ftlab.hecke import HabiroFamily, habiro_series, verify_hecke_expansion

P = 2

for k in range(1, 6):
    fam = HabiroFamily(P, k)
    print(f"H_{P}^({k}), linear part {fam.m}:")
    print("   ", habiro_series(P, k, 15).pretty(10))
    print("    double sum to order 60:", verify_hecke_expansion(P, k, 60).status)
    print("    false theta form to order 20:", verify_habiro_false(P, k, 20).status)

# the two members left out of the false-theta statement
for k in (1, 3):
    gap = verify_habiro_false(1, k, 12)
    print(f"p=1, k={k}: eta*H minus the false theta form =", gap.difference.pretty(5))
