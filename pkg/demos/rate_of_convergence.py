"""
Rate of convergence at a Holder cusp
====================================

The weight ``exp(|theta|^s)`` (normalised) is only Holder continuous at
``theta = 0``.  We compare
the normalised diagonal Christoffel-Darboux kernel at ``x_n = 1 - 1/n`` with
the same quantity for Lebesgue measure, and watch the difference ``D(n)``
decay like ``n^{-s}``.
"""

import numpy as np

from opuc_rates import make_weight, rate_experiment, tail_slope
from opuc_rates.experiments import figure2_data

s = 0.4
w = make_weight("holder", s)

###############################################################################
# One Levinson pass gives every Verblunsky coefficient up to ``N``; the
# kernels for all intermediate dimensions are then read off the same
# recursion.

records = rate_experiment(w, 2000, 20)
for r in records[::20]:
    print(f"n = {r.n:5d}   D = {r.D:.6e}   alphaCand = {r.alpha_cand:.5f}")

###############################################################################
# A least-squares fit on the upper half of the window gives the exponent.

print("tail slope of log D vs log n:", tail_slope(records))

###############################################################################
# The reference route indexes the kernel by its loop counter, which shifts
# the dimension by one.  That convention reproduces the reference numbers at
# N = 8000 (alphaCand near 0.39366, C near 0.03791).

long = rate_experiment(w, 8000, 20, convention="script")
print("N = 8000, script convention:", long[-1].alpha_cand, long[-1].c_alpha_cand)

###############################################################################
# ``f1 = D`` against ``f2 = C n^{-s}`` for smaller exponents.  With
# ``--plot`` the CLI draws the same curves to SVG.

for s_small in (0.1, 0.2):
    table = figure2_data(s_small, 2000, 20)
    print(f"s = {s_small}: C = {table.constant:.5f}, f1 >= f2 on tail: {table.tail_holds}")
    print("   ratio f1/f2 at the last five n:", np.round(table.f1[-5:] / table.f2[-5:], 4))
