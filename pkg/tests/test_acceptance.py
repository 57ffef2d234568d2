"""Acceptance suite: one PASS/FAIL line per criterion, at the stated tolerance.

Lines are echoed under "acceptance criteria" in the pytest summary.  Three
checks are known not to hold as stated; they are kept at full strength and
marked ``xfail(strict=True)`` so the line still reads FAIL:

* the printed diagonal closed form for the Poisson weight treats the k = 0
  term like the others, which is off by ``|1 - conj(lam)/z|^2/(1-|lam|^2) - 1``
  (relative ``O(1/n)``); the corrected form is checked alongside;
* at s = 0.4 and s = 1 the entropy decays more steeply over the window
  ``1 - rho`` in [1e-4, 1e-1] than its asymptotic exponent, so the window fit
  misses 0.05.
"""

import time

import numpy as np
import pytest

from opuc_rates.entropy import entropy_at, entropy_profile, fit_entropy_exponent
from opuc_rates.experiments import (
    figure2_data, poisson_example_check, rate_experiment, tail_slope, theorem1_sweep,
    verblunsky_for,
)
from opuc_rates.kernels import KernelContext, cd_kernel, deviation_matrix, szego_step, szego_values
from opuc_rates.measures import compute_moments, make_weight, parse_weight
from opuc_rates.opuc import (
    VerblunskyCoefficients, dense_orthonormal, eval_poly, levinson, szego_polynomials,
)

from oracles import circle_rule, poisson_diag_exact, poisson_diag_printed, poisson_entropy, poisson_phi

BUILTINS = ["lebesgue", "poisson:0.5", "poisson:0.3-0.6j", "holder:0.1", "holder:0.2",
            "holder:0.4", "holder:0.5", "holder:1", "holder:2"]
KNOWN_FAILURE = pytest.mark.xfail(strict=True, reason="criterion does not hold as stated; "
                                  "see module docstring")


def disk_points(rng, center, radius, size):
    r = radius * np.sqrt(rng.uniform(size=size))
    return center + r * np.exp(2j * np.pi * rng.uniform(size=size))


# 1 ---------------------------------------------------------------------------

def test_criterion_1_lebesgue_exactness(verdict):
    worst = 0.0
    for n in (5, 50, 500):
        rng = np.random.default_rng(100 + n)
        ctx = KernelContext(levinson(np.eye(1, n + 1)[0]), n)
        z1, z2 = disk_points(rng, 1, 1 / n, 100), disk_points(rng, 1, 1 / n, 100)
        ratio, universal = deviation_matrix(ctx, 1.0, z1, z2)
        worst = max(worst, np.abs(ratio - universal).max())
    took = time.perf_counter() - verdict.start
    assert verdict(worst < 1e-12 and took < 1, f"max |delta| = {worst:.2e} (< 1e-12), "
                   f"runtime {took:.2f} s (< 1 s)")


# 2 ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def poisson_half():
    w = make_weight("poisson", 0.5)
    return verblunsky_for(w, 513)


def test_criterion_2a_poisson_verblunsky(verdict, poisson_half):
    a = poisson_half.a
    err0, rest = abs(a[0] - 0.5), np.abs(a[1:]).max()
    assert verdict(err0 < 1e-10 and rest < 1e-10,
                   f"|a_0 - 0.5| = {err0:.1e}, max_(k>=1) |a_k| = {rest:.1e} (< 1e-10)")


def test_criterion_2b_poisson_polynomials(verdict, poisson_half):
    rng = np.random.default_rng(2)
    z = disk_points(rng, 0, 1.0, 60)
    worst = 0.0
    for n in (1, 2, 16, 128, 512):
        pair = szego_polynomials(poisson_half.truncated(n), n)
        phi, star = poisson_phi(0.5, n, z)
        worst = max(worst, np.abs(eval_poly(pair[n], z) - phi).max(),
                    np.abs(eval_poly(pair.phi_star_n, z) - star).max())
    assert verdict(worst < 1e-8, f"max closed-form error of phi_n, phi_n^* = {worst:.1e} (< 1e-8)")


def _diag_errors(v, closed_form):
    rng = np.random.default_rng(3)
    worst = 0.0
    for n in (2, 16, 128, 512):
        ctx = KernelContext(v.truncated(n), n)
        z = np.concatenate((disk_points(rng, 0, 1.0, 40), [1.0, -1.0, 0.5j]))
        z = z[np.abs(z) > 0.05]
        k = cd_kernel(ctx, z, z).real
        ref = np.array([closed_form(0.5, n, x) for x in z])
        worst = max(worst, np.max(np.abs(k - ref) / ref))
    return worst


@KNOWN_FAILURE
def test_criterion_2c_poisson_diagonal_printed_form(verdict, poisson_half):
    worst = _diag_errors(poisson_half, poisson_diag_printed)
    assert verdict(worst < 1e-8, f"relative error vs printed closed form = {worst:.1e} (< 1e-8)")


def test_criterion_2c_poisson_diagonal_corrected_form(verdict, poisson_half):
    worst = _diag_errors(poisson_half, poisson_diag_exact)
    assert verdict(worst < 1e-8, f"relative error vs 1 + sum_(1<=k<n)|phi_k|^2 = {worst:.1e} "
                   "(< 1e-8)")


# 3 ---------------------------------------------------------------------------

def test_criterion_3_entropy_oracle(verdict):
    r = np.linspace(0.0, 0.99, 10)
    z = (r[:, None] * np.exp(2j * np.pi * (np.arange(10) + 0.5) / 10)).ravel()
    worst = 0.0
    for lam in (0.3, 0.5, 0.9):
        w = make_weight("poisson", lam)
        got = np.array([entropy_at(w, x) for x in z])
        worst = max(worst, np.abs(got - poisson_entropy(lam, z)).max())
    assert verdict(worst < 1e-8, f"max error on 100-point grid, lam in {{0.3, 0.5, 0.9}} = "
                   f"{worst:.1e} (< 1e-8)")


# 4 ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def holder_profiles():
    return {s: entropy_profile(make_weight("holder", s)) for s in (0.2, 0.4, 0.5, 1.0)}


def _beta_check(verdict, profiles, s, target):
    beta, _, _ = fit_entropy_exponent(profiles[s])
    assert verdict(abs(beta - target) <= 0.05,
                   f"s = {s}: beta = {beta:.4f}, target {target} +- 0.05")


@KNOWN_FAILURE
def test_criterion_4a_entropy_exponent_s04(verdict, holder_profiles):
    _beta_check(verdict, holder_profiles, 0.4, 0.8)


def test_criterion_4b_entropy_exponent_s02(verdict, holder_profiles):
    _beta_check(verdict, holder_profiles, 0.2, 0.4)


@KNOWN_FAILURE
def test_criterion_4c_entropy_exponent_s1(verdict, holder_profiles):
    _beta_check(verdict, holder_profiles, 1.0, 1.0)


def test_criterion_4d_entropy_log_correction_s05(verdict, holder_profiles):
    prof = holder_profiles[0.5]
    _, _, plain = fit_entropy_exponent(prof)
    _, _, corrected = fit_entropy_exponent(prof, "log-corrected")
    assert verdict(corrected < plain, f"s = 0.5: residual log-corrected {corrected:.3f} < "
                   f"plain {plain:.3f}")


# 5 ---------------------------------------------------------------------------

def test_criterion_5_poisson_scaling(verdict):
    chk = poisson_example_check(0.5, [100, 200, 400, 800])
    scaled = ", ".join(f"{x:.3f}" for x in chk.scaled)
    assert verdict(chk.band <= 4, f"n sup|delta_n| = [{scaled}], band {chk.band:.3f} (<= 4)")


# 6 ---------------------------------------------------------------------------

def test_criterion_6_rate_s04(verdict):
    recs = rate_experiment(make_weight("holder", 0.4), 2000, 20)
    alpha = -tail_slope(recs)
    assert verdict(abs(alpha - 0.4) <= 0.05, f"N = 2000: tail alpha = {alpha:.4f} (0.4 +- 0.05)")


def test_criterion_6_long_run_target(verdict):
    """The N = 8000 run with the loop-index convention (kernel dimension n - 1)."""
    recs = rate_experiment(make_weight("holder", 0.4), 8000, 20, convention="script")
    tail = np.array([r.alpha_cand for r in recs if r.n >= 7000])
    c = recs[-1].c_alpha_cand
    ok = np.all(np.abs(tail - 0.3936) <= 5e-4) and abs(c - 0.0379) <= 5e-4
    assert verdict(ok, f"N = 8000: alphaCand tail in [{tail.min():.5f}, {tail.max():.5f}] "
                   f"(0.3936 +- 5e-4), C = {c:.5f} (0.0379 +- 5e-4)")


# 7 ---------------------------------------------------------------------------

@pytest.mark.parametrize("s", [0.1, 0.2])
def test_criterion_7_rate_small_s(verdict, s):
    table = figure2_data(s, 2000, 20)
    slope = tail_slope(table.records)
    ok = abs(slope + s) <= 0.05 and table.tail_holds
    assert verdict(ok, f"s = {s}: tail slope {slope:.4f} (-s +- 0.05), "
                   f"f1 >= f2 on tail: {table.tail_holds}")


# 8 ---------------------------------------------------------------------------

def test_criterion_8_solver_cross_checks(verdict):
    dense = orth = 0.0
    t, wt = circle_rule()
    for spec in BUILTINS:
        w = parse_weight(spec)
        m = compute_moments(w, 257)
        v = levinson(m)
        for n in (1, 16, 64, 128, 256):
            dense = max(dense, np.abs(szego_polynomials(v, n)[n] - dense_orthonormal(m, n)).max())
        phi = szego_polynomials(v, 64).phi
        values = phi @ np.exp(1j * np.outer(np.arange(65), t))
        gram = (values * (w(t) * wt)) @ values.conj().T
        orth = max(orth, np.abs(gram - np.eye(65)).max())

    rng = np.random.default_rng(8)
    base = VerblunskyCoefficients.from_coefficients(
        0.8 * rng.uniform(size=12) * np.exp(2j * np.pi * rng.uniform(size=12)))
    step_err = 0.0
    for _ in range(100):
        a = 0.99 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        z1, z2 = disk_points(rng, 0, 1.5, 2)
        p1, s1 = szego_values(base, z1, 11)
        p2, s2 = szego_values(base, z2, 11)
        t1, ts1 = szego_step(p1, s1, a, z1)
        t2, ts2 = szego_step(p2, s2, a, z2)
        q1, qs1 = szego_step(p1, s1, base.a[11], z1)
        q2, qs2 = szego_step(p2, s2, base.a[11], z2)
        lhs = np.conj(ts2) * ts1 - np.conj(t2) * t1
        rhs = np.conj(qs2) * qs1 - np.conj(q2) * q1
        step_err = max(step_err, abs(lhs - rhs) / max(1.0, abs(rhs)))
    ok = dense < 1e-8 and orth < 1e-8 and step_err < 1e-10
    assert verdict(ok, f"Levinson vs dense {dense:.1e} (< 1e-8), orthonormality {orth:.1e} "
                   f"(< 1e-8), last-step identity {step_err:.1e} (< 1e-10)")


# entropy bound property checks -------------------------------------------------

def test_theorem1_empirical_ratio_bounded(verdict):
    n_list = [100, 200, 400, 800]
    holder = theorem1_sweep(make_weight("holder", 0.4), 1.0, 1.0, n_list)
    poisson = theorem1_sweep(make_weight("poisson", 0.5), 1.0, 1.0, n_list)
    lebesgue = theorem1_sweep(make_weight("lebesgue"), 1.0, 1.0, n_list[:2])
    h = np.array([r.empirical_ratio for r in holder])
    p = np.array([r.empirical_ratio for r in poisson])
    ok = (h.max() / h.min() < 2 and np.all(np.diff(p) < 0)
          and all(r.consistent for r in holder + poisson + lebesgue))
    assert verdict(ok, f"holder 0.4 ratio in [{h.min():.4f}, {h.max():.4f}], poisson 0.5 ratio "
                   f"{p[0]:.4f} -> {p[-1]:.4f} (decreasing), lebesgue lhs = 0")
