"""
Entropy near the cusp
=====================

``K(z)`` is the log of the Poisson extension of the weight minus the Poisson
extension of its log.  For the Holder weight it vanishes at the cusp like a
power of ``1 - rho``; for ``s = 1/2`` a log factor appears.
"""

import numpy as np

from opuc_rates import make_weight
from opuc_rates.entropy import entropy_at, entropy_profile, fit_entropy_exponent

###############################################################################
# Closed form check with the Poisson weight.

lam, z = 0.5, 0.8
print(entropy_at(make_weight("poisson", lam), z), np.log((1 - lam ** 2 * z ** 2) / (1 - lam ** 2)))

###############################################################################
# Window fits over ``1 - rho`` in ``[1e-4, 1e-1]``.  The asymptotic
# exponent is ``min(2s, 1)``, but at ``s = 0.4`` the window is still
# pre-asymptotic and the fit lands near 0.67.

for s in (0.2, 0.4, 0.5, 1.0):
    prof = entropy_profile(make_weight("holder", s))
    beta, c, res = fit_entropy_exponent(prof)
    line = f"s = {s}: beta = {beta:.4f}  C = {c:.4f}  residual = {res:.3f}"
    if s == 0.5:
        beta_l, _, res_l = fit_entropy_exponent(prof, "log-corrected")
        line += f"   log-corrected: beta = {beta_l:.4f} residual = {res_l:.3f}"
    print(line)

###############################################################################
# Local slopes deep inside the disk approach the asymptotic exponent.

w = make_weight("holder", 0.4)
gaps = np.geomspace(1e-3, 1e-7, 5)
k = np.array([entropy_at(w, 1 - g) for g in gaps])
print("local slopes:", np.round(np.diff(np.log(k)) / np.diff(np.log(gaps)), 4))
