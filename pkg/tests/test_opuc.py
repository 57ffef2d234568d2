import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from opuc_rates.errors import NotPositiveDefiniteError
from opuc_rates.measures import compute_moments, make_weight, parse_weight
from opuc_rates.opuc import (
    VerblunskyCoefficients, dense_orthonormal, eval_poly, levinson, reflect, szego_polynomials,
)

from oracles import circle_rule, gram_schmidt, poisson_phi, quadrature_inner

BUILTINS = ["lebesgue", "poisson:0.5", "poisson:0.3-0.6j", "holder:0.1", "holder:0.4",
            "holder:0.5", "holder:1", "holder:2"]


def test_levinson_lebesgue():
    v = levinson([1, 0, 0, 0])
    assert np.allclose(v.a, 0) and np.allclose(v.kappa, 1)


def test_levinson_poisson_moments():
    v = levinson([1, 0.5, 0.25, 0.125])
    assert np.allclose(v.a, [0.5, 0, 0], atol=1e-15)
    assert np.allclose(v.kappa, [1] + [1 / np.sqrt(0.75)] * 3)
    assert v.residual < 1e-14


def test_levinson_degree_one():
    assert levinson([1, 0.3]).a[0] == pytest.approx(0.3)
    # complex: <z - conj(a), 1> = 0 fixes conj(a) = conj(c_1)/c_0, so a = c_1
    assert levinson([2, 0.3 + 0.4j]).a[0] == pytest.approx(0.15 + 0.2j)


def test_levinson_rejects_indefinite():
    with pytest.raises(NotPositiveDefiniteError) as info:
        levinson([1, 0.9, 0.1])
    assert info.value.index == 1
    with pytest.raises(NotPositiveDefiniteError):
        levinson([-1, 0])


def test_kappa_increasing():
    v = levinson(compute_moments(make_weight("holder", 0.4), 100))
    assert np.all(np.diff(v.kappa) > 0)
    assert np.allclose(v.kappa[1:], v.kappa[:-1] / v.rho)


def test_poisson_closed_form_polynomials():
    pair = szego_polynomials(VerblunskyCoefficients.from_coefficients([0.5, 0, 0]), 3)
    s = np.sqrt(0.75)
    assert np.allclose(pair[3], [0, 0, -0.5 / s, 1 / s])
    assert np.allclose(pair.phi_star_n, [1 / s, -0.5 / s, 0, 0])
    assert eval_poly(pair[3], 1.0) == pytest.approx(0.5 / s)


@pytest.mark.parametrize("spec", BUILTINS)
def test_levinson_matches_dense_solve(spec):
    m = compute_moments(parse_weight(spec), 257)
    v = levinson(m)
    for n in (1, 16, 128, 256):
        pair = szego_polynomials(v, n)
        assert np.max(np.abs(pair[n] - dense_orthonormal(m, n))) < 1e-8


@pytest.mark.parametrize("spec", BUILTINS)
def test_orthonormality_by_quadrature(spec):
    w = parse_weight(spec)
    v = levinson(compute_moments(w, 65))
    phi = szego_polynomials(v, 64).phi
    t, wt = circle_rule()
    values = phi @ np.exp(1j * np.outer(np.arange(65), t))
    gram = (values * (w(t) * wt)) @ values.conj().T
    assert np.max(np.abs(gram - np.eye(65))) < 1e-8


@pytest.mark.parametrize("spec", BUILTINS)
def test_orthonormality_via_moments(spec):
    """<phi_j, phi_k> = phi_j^T T conj(phi_k) with the exact moment matrix."""
    m = compute_moments(parse_weight(spec), 65)
    phi = szego_polynomials(levinson(m), 64).phi
    t = m.toeplitz()
    gram = phi.conj() @ t @ phi.T
    assert np.max(np.abs(gram - np.eye(65))) < 1e-8


def test_gram_schmidt_agreement():
    rng = np.random.default_rng(7)
    a = 0.9 * rng.uniform(0, 1, 8) * np.exp(2j * np.pi * rng.uniform(size=8))
    v = VerblunskyCoefficients.from_coefficients(a)
    # moments of the measure with these coefficients: Bernstein-Szego weight
    # 1/|phi_8^*|^2 (times its normalisation) reproduces a_0..a_7
    star = szego_polynomials(v, 8).phi_star_n
    w = make_weight("custom", func=lambda t: 1 / np.abs(eval_poly(star, np.exp(1j * t))) ** 2)
    basis = gram_schmidt(quadrature_inner(w, 2 ** 14), 8)
    assert np.max(np.abs(basis - szego_polynomials(v, 8).phi)) < 1e-8


@given(st.integers(0, 40), st.integers(1, 1000))
@settings(max_examples=30, deadline=None)
def test_recurrence_consistency(n, seed):
    rng = np.random.default_rng(seed)
    a = 0.95 * rng.uniform(0, 1, n + 1) * np.exp(2j * np.pi * rng.uniform(size=n + 1))
    v = VerblunskyCoefficients.from_coefficients(a)
    z = np.sqrt(rng.uniform(0, 1, 100)) * np.exp(2j * np.pi * rng.uniform(size=100))
    pair = szego_polynomials(v, n + 1)
    prev = eval_poly(pair[n], z)
    prev_star = eval_poly(reflect(pair[n], n), z)
    rhs = (z * prev - np.conj(a[n]) * prev_star) / np.sqrt(1 - abs(a[n]) ** 2)
    lhs = eval_poly(pair[n + 1], z)
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.max(np.abs(lhs)))


@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=12), st.integers(0, 4))
def test_reflect_is_involution(coefs, extra):
    deg = len(coefs) - 1 + extra
    assert np.allclose(reflect(reflect(coefs, deg), deg)[:len(coefs)], coefs)


def test_reflect_examples():
    assert np.allclose(reflect([1, 2j, 3], 2), [3, -2j, 1])
    assert np.allclose(reflect([0, 0, 0, 1], 3), [1, 0, 0, 0])
    assert eval_poly([1, -0.5], 1) == 0.5
    assert eval_poly([0, 0, 1], 1j) == -1


def test_reversed_polynomial_is_zero_free():
    for spec in ("holder:0.4", "poisson:0.9"):
        v = levinson(compute_moments(parse_weight(spec), 129))
        r = np.linspace(0, 1, 60)[:, None]
        z = r * np.exp(2j * np.pi * np.linspace(0, 1, 240, endpoint=False))
        star = eval_poly(szego_polynomials(v, 128).phi_star_n, z)
        assert np.min(np.abs(star)) > 1e-3
        # |phi*|^2 - |phi|^2 > 0 inside the disk
        inside = z[r[:, 0] < 1]
        phi = eval_poly(szego_polynomials(v, 128)[128], inside)
        diff = np.abs(eval_poly(szego_polynomials(v, 128).phi_star_n, inside)) ** 2 - abs(phi) ** 2
        assert np.all(diff > 0)


def test_leading_coefficient_is_kappa():
    v = levinson(compute_moments(make_weight("holder", 0.2), 33))
    pair = szego_polynomials(v, 32)
    assert all(pair[k][-1] == pytest.approx(v.kappa[k]) for k in range(33))


def test_poisson_orthonormal_closed_form():
    v = levinson(compute_moments(make_weight("poisson", 0.5), 20))
    pair = szego_polynomials(v, 19)
    z = np.exp(1j * np.linspace(0, 3, 7)) * 0.9
    phi, star = poisson_phi(0.5, 19, z)
    assert np.max(np.abs(eval_poly(pair[19], z) - phi)) < 1e-12
    assert np.max(np.abs(eval_poly(pair.phi_star_n, z) - star)) < 1e-12
