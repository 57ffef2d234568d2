"""
Bernstein-Szego weight
======================

For ``w = (1 - |lam|^2) / |1 - lam e^{-it}|^2`` only ``a_0 = lam`` is
nonzero, so everything is explicit.  The kernel ratio differs from the
universal limit by order ``1/n``.
"""

import numpy as np

from opuc_rates import make_weight
from opuc_rates.experiments import poisson_example_check, verblunsky_for

v = verblunsky_for(make_weight("poisson", 0.5), 64)
print("|a_0| .. |a_4|:", np.round(np.abs(v.a[:5]), 14))

chk = poisson_example_check(0.5, [100, 200, 400, 800])
for n, sup, scaled in zip(chk.n, chk.sup, chk.scaled):
    print(f"n = {n:4d}   sup|delta| = {sup:.4e}   n * sup = {scaled:.4f}")
print("band:", chk.band)
