"""
Entropy bound sweep
===================

The deviation from the universal kernel on a disk of radius ``A/n`` around
``zeta`` is controlled by the entropy on a slightly larger region.  The
absolute constant is not explicit, so we look at the empirical ratio
``lhs / entropy`` across ``n``.
"""

from opuc_rates import make_weight
from opuc_rates.experiments import theorem1_sweep

for label, w in (("holder 0.4", make_weight("holder", 0.4)),
                 ("poisson 0.5", make_weight("poisson", 0.5)),
                 ("lebesgue", make_weight("lebesgue"))):
    print(label)
    for r in theorem1_sweep(w, 1.0, 1.0, [100, 200, 400]):
        print(f"  n = {r.n:4d}  lhs = {r.lhs:.4e}  sup K = {r.entropy_sup:.4e}  "
              f"ratio = {r.empirical_ratio}")
