"""Orthogonal polynomials on the unit circle and the rate of kernel universality.

Weights and moments live in :mod:`opuc_rates.measures`, the Szego recursion in
:mod:`opuc_rates.opuc`, Christoffel-Darboux kernels in
:mod:`opuc_rates.kernels`, the entropy function in :mod:`opuc_rates.entropy`
and the end-to-end experiments in :mod:`opuc_rates.experiments`.
"""
from .entropy import entropy_at, entropy_profile, entropy_sup_on_radius, fit_entropy_exponent
from .errors import *  # noqa: F401,F403
from .experiments import (
    RateRecord, Theorem1Report, figure2_data, poisson_example_check, rate_experiment,
    tail_slope, theorem1_check, theorem1_sweep,
)
from .kernels import (
    KernelContext, cd_kernel, deviation, deviation_matrix, sine_type_limit, universal_ratio,
)
from .measures import (
    CircleWeight, MomentSequence, compute_moments, make_weight, normalize_weight, parse_weight,
    weight_from_samples,
)
from .opuc import VerblunskyCoefficients, eval_poly, levinson, reflect, szego_polynomials

__version__ = "0.1.0"
