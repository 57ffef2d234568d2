import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from opuc_rates.entropy import (
    EntropyProfile, entropy_at, entropy_profile, entropy_sup_on_radius, fit_entropy_exponent,
    poisson_integral, poisson_kernel,
)
from opuc_rates.errors import InsufficientSpanError, InvalidParameterError
from opuc_rates.measures import make_weight

from oracles import HOLDER04_ENTROPY, poisson_entropy


def test_poisson_kernel_unit_mass():
    for z in (0.0, 0.5j, 0.99 * np.exp(2j), 0.99999):
        assert poisson_integral(lambda t: np.ones_like(t), z) == pytest.approx(1, abs=1e-13)


def test_poisson_kernel_stable_form():
    t, z = 0.3, 0.7 * np.exp(0.1j)
    assert poisson_kernel(t, z) == pytest.approx(
        (1 - abs(z) ** 2) / abs(1 - np.exp(-1j * t) * z) ** 2, rel=1e-14)


def test_poisson_of_poisson_weight():
    lam, z = 0.5, 0.6 * np.exp(1j)
    w = make_weight("poisson", lam)
    assert poisson_integral(w, z) == pytest.approx(
        (1 - abs(lam * z) ** 2) / abs(1 - lam * z) ** 2, rel=1e-12)
    assert poisson_integral(w.log, z) == pytest.approx(
        np.log((1 - lam ** 2) / abs(1 - lam * z) ** 2), abs=1e-12)


def test_entropy_poisson_example():
    assert entropy_at(make_weight("poisson", 0.5), 0.8) == pytest.approx(np.log(0.84 / 0.75),
                                                                         rel=1e-12)


def test_entropy_lebesgue_is_zero():
    w = make_weight("lebesgue")
    assert entropy_at(w, 0.9) == 0.0
    assert entropy_at(w.scaled(3.0), 0.2j) == 0.0
    assert entropy_sup_on_radius(w, 1.0, 0.99) == 0.0


def test_entropy_holder_against_mpmath():
    w = make_weight("holder", 0.4)
    for n, ref in HOLDER04_ENTROPY.items():
        assert entropy_at(w, 1 - 1 / n) == pytest.approx(ref, rel=1e-9)


@given(st.floats(0.01, 100), st.floats(0, 0.999), st.floats(-np.pi, np.pi))
@settings(max_examples=15, deadline=None)
def test_normalisation_invariance(alpha, r, t):
    w = make_weight("holder", 0.3)
    z = r * np.exp(1j * t)
    assert abs(entropy_at(w.scaled(alpha), z) - entropy_at(w, z)) < 1e-10


@pytest.mark.parametrize("spec", [("holder", 0.1), ("holder", 0.5), ("holder", 2.0),
                                  ("poisson", 0.9)])
def test_nonnegative_and_decaying(spec):
    w = make_weight(*spec)
    vals = [entropy_at(w, 1 - g) for g in (1e-1, 1e-2, 1e-3, 1e-4)]
    assert all(v >= 0 for v in vals)
    assert vals[-1] < vals[0] / 2 and vals == sorted(vals, reverse=True)


def test_sup_on_radius_poisson_is_at_inner_radius():
    lam, rho = 0.5, 1 - 1 / 50
    w = make_weight("poisson", lam)
    assert entropy_sup_on_radius(w, 1.0, rho) == pytest.approx(poisson_entropy(lam, rho),
                                                              rel=1e-12)


def test_sup_on_radius_holder_scaling():
    w = make_weight("holder", 0.4)
    a = entropy_sup_on_radius(w, 1.0, 1 - 1 / 500)
    b = entropy_sup_on_radius(w, 1.0, 1 - 1 / 5000)
    # Theta(n^-0.8), with the pre-asymptotic slope well above 0.5
    assert 0.5 < np.log10(a / b) < 1.0


def test_sup_on_radius_validates():
    with pytest.raises(InvalidParameterError):
        entropy_sup_on_radius(make_weight("lebesgue"), 1.0, 1.0)


def test_fit_exact_power_law():
    gaps = np.geomspace(1e-1, 1e-4, 12)
    prof = EntropyProfile(1.0, 1 - gaps, 3.0 * gaps ** 0.8)
    beta, c, res = fit_entropy_exponent(prof)
    assert beta == pytest.approx(0.8, abs=1e-12) and c == pytest.approx(3.0) and res < 1e-10
    prof2 = EntropyProfile(1.0, 1 - gaps, gaps * np.abs(np.log(gaps)))
    beta, _, res = fit_entropy_exponent(prof2, "log-corrected")
    assert beta == pytest.approx(1.0, abs=1e-12) and res < 1e-10


def test_fit_requires_span():
    prof = EntropyProfile(1.0, 1 - np.geomspace(1e-1, 1e-2, 12), np.ones(12))
    with pytest.raises(InsufficientSpanError):
        fit_entropy_exponent(prof)
    prof = EntropyProfile(1.0, 1 - np.geomspace(1e-1, 1e-4, 5), np.ones(5))
    with pytest.raises(InsufficientSpanError):
        fit_entropy_exponent(prof)


def test_profile_threads_give_same_values():
    w = make_weight("holder", 0.2)
    gaps = np.geomspace(1e-1, 1e-3, 6)
    a = entropy_profile(w, 1.0, gaps).values
    b = entropy_profile(w, 1.0, gaps, threads=3).values
    assert np.array_equal(a, b)


@pytest.mark.parametrize("zeta", [-1.0, 1j])
def test_profile_away_from_cusp(zeta):
    # away from the cusp the weight is Lipschitz, and the heavy Poisson tail
    # makes K decay like 1 - rho
    w = make_weight("holder", 0.4)
    prof = entropy_profile(w, zeta, np.geomspace(1e-2, 1e-4, 9))
    beta, _, _ = fit_entropy_exponent(prof)
    assert beta == pytest.approx(1.0, abs=0.05)
