"""End-to-end numerical experiments on the rate of universality.

* :func:`rate_experiment` -- the deviation ``D(n)`` at ``x_n = 1 - 1/n`` and
  the successive-ratio exponent estimates ``alphaCand`` / ``CalphaCand``.
* :func:`figure2_data` -- ``f1 = D`` against the power law ``f2 = C n^{-s}``.
* :func:`poisson_example_check` -- ``n * sup |delta_n|`` for the
  Bernstein-Szego weight.
* :func:`theorem1_check` -- sup of the deviation over ``B(zeta, A/n)``
  against ``e^{4A} sqrt(sup K)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .entropy import entropy_sup_on_radius
from .errors import InvalidParameterError
from .kernels import KernelContext, deviation_matrix
from .measures import DEFAULT_TOL, make_weight, moment_cache
from .opuc import levinson

CONVENTIONS = ("dimension", "script")


@dataclass(frozen=True)
class RateRecord:
    """One row of the rate table.

    ``alpha_cand`` and ``c_alpha_cand`` are ``nan`` where undefined (first
    row, or a vanishing deviation).
    """

    n: int
    x_n: float
    D: float
    alpha_cand: float = math.nan
    c_alpha_cand: float = math.nan
    signed: float = field(default=0.0, repr=False)


def verblunsky_for(w, n, tol=DEFAULT_TOL):
    """Verblunsky coefficients ``a_0 .. a_{n-2}`` of ``w`` (from ``n`` moments)."""
    return levinson(moment_cache.get(w, n, tol), compute_residual=False)


def diagonal_deviations(v, dims, points):
    """Signed ``k_m(x, x)/k_m(1, 1) - k_m(x, x)/k_m(1, 1)`` for pairs ``(dim, x)``.

    For each ``i`` the first term uses the Lebesgue kernel and the second the
    kernel of ``v``, both of dimension ``dims[i]`` at ``points[i]``.  The
    Lebesgue kernel is run through the same recursion with zero
    coefficients, so the result is exactly zero when ``v`` is Lebesgue.
    """
    dims = np.asarray(dims, dtype=int)
    x = np.asarray(points, dtype=complex)
    top = int(dims.max())
    if top - 1 > v.n:
        raise InvalidParameterError(f"dimension {top} needs {top - 1} coefficients, got {v.n}")
    a, rho = v.a, v.rho
    phi = np.full(x.shape, v.kappa[0], dtype=complex)
    star = phi.copy()
    one = v.kappa[0] + 0j
    one_star = one
    leb = np.ones(x.shape, dtype=complex)
    acc_x = np.zeros(x.shape)
    acc_leb = np.zeros(x.shape)
    cum_one = np.empty(top + 1)
    cum_one[0] = 0.0
    for k in range(top):
        live = k < dims
        acc_x += np.where(live, np.abs(phi) ** 2, 0.0)
        acc_leb += np.where(live, np.abs(leb) ** 2, 0.0)
        cum_one[k + 1] = cum_one[k] + abs(one) ** 2
        if k + 1 < top:
            ca = np.conj(a[k])
            zphi = x * phi
            phi, star = (zphi - ca * star) / rho[k], (star - a[k] * zphi) / rho[k]
            one, one_star = (one - ca * one_star) / rho[k], (one_star - a[k] * one) / rho[k]
            leb = x * leb
    ratio_mu = acc_x / cum_one[dims]
    ratio_leb = acc_leb / dims
    return ratio_leb - ratio_mu


def rate_experiment(w, N, step, tol=DEFAULT_TOL, convention="dimension", v=None,
                    script_first_row=False):
    """Deviation table for ``n = step, 2 step, ..., N``.

    ``D(n) = |k_n(x_n, x_n)/k_n(1, 1) - (1 - x_n^{2n}) / (n (1 - x_n^2))|``
    with ``x_n = 1 - 1/n``.  With ``convention='script'`` the kernels have
    dimension ``n - 1`` instead (still at ``x_n = 1 - 1/n``), which is what
    a Toeplitz solve with ``n`` moments followed by division by
    ``1 - conj(z2) z1`` produces.

    ``alpha_cand(k) = k (D(k-1)/D(k) - 1)`` on the signed deviations and
    ``c_alpha_cand(k) = D(k) n^{alpha_cand(k)}``.  The first row has no
    predecessor and is left undefined unless ``script_first_row`` is set, in
    which case the previous deviation is taken as 0 (giving
    ``alpha_cand = -1``).
    """
    step, N = int(step), int(N)
    if step < 1 or N % step or N // step < 3:
        raise InvalidParameterError("need step >= 1, N a multiple of step and N/step >= 3")
    if convention not in CONVENTIONS:
        raise InvalidParameterError(f"unknown convention {convention!r}")
    ns = np.arange(step, N + 1, step)
    dims = ns if convention == "dimension" else ns - 1
    if v is None:
        v = verblunsky_for(w, int(dims.max()), tol)
    x = 1.0 - 1.0 / ns
    signed = diagonal_deviations(v, dims, x)
    records = []
    prev = 0.0 if script_first_row else None
    for k, (n, xn, d) in enumerate(zip(ns, x, signed), start=1):
        alpha = c_alpha = math.nan
        if prev is not None and d != 0:
            alpha = float(k * (prev / d - 1.0))
            c_alpha = float(abs(d) * float(n) ** alpha)
        records.append(RateRecord(int(n), float(xn), float(abs(d)), alpha, c_alpha, float(d)))
        prev = d
    return records


def tail_slope(records, start=0.5):
    """Least-squares slope of ``log D`` against ``log n`` for ``n >= start * N``.

    Returns ``nan`` if fewer than three positive deviations are available.
    """
    n = np.array([r.n for r in records], dtype=float)
    d = np.array([r.D for r in records])
    keep = (n >= start * n.max()) & (d > 0)
    if keep.sum() < 3:
        return math.nan
    slope, _ = np.polyfit(np.log(n[keep]), np.log(d[keep]), 1)
    return float(slope)


@dataclass
class Figure2Table:
    """``f1(n) = D(n)`` and ``f2(n) = C n^{-s}``.

    ``constant`` is the last ``CalphaCand``; it and ``f2`` are ``None`` when
    no power law can be fitted (e.g. a vanishing deviation).
    """

    s: float
    n: np.ndarray
    f1: np.ndarray
    f2: Optional[np.ndarray]
    constant: Optional[float]
    alpha: Optional[float]
    tail_holds: Optional[bool]
    records: list


def figure2_data(s, N, step, weight=None, tol=DEFAULT_TOL, tail=0.5, slack=1e-9,
                 convention="dimension"):
    """Curves ``f1`` and ``f2`` for the Holder weight of exponent ``s``.

    ``tail_holds`` records whether ``f1 >= f2 (1 - slack)`` for every
    ``n >= tail * N``.
    """
    if weight is None:
        if not 0 < s < 0.5:
            raise InvalidParameterError("s must lie in (0, 1/2)")
        weight = make_weight("holder", s)
    records = rate_experiment(weight, N, step, tol, convention)
    n = np.array([r.n for r in records])
    f1 = np.array([r.D for r in records])
    last = records[-1]
    if not (last.D > 0 and np.isfinite(last.c_alpha_cand)):
        return Figure2Table(s, n, f1, None, None, None, None, records)
    f2 = last.c_alpha_cand * n.astype(float) ** (-s)
    on_tail = n >= tail * N
    holds = bool(np.all(f1[on_tail] >= f2[on_tail] * (1 - slack)))
    return Figure2Table(s, n, f1, f2, last.c_alpha_cand, last.alpha_cand, holds, records)


def disk_grid(center, radius, radii=17, angles=32):
    """Polar grid on the closed disk: the centre plus ``radii - 1`` circles
    (the last one the boundary) of ``angles`` points each."""
    r = np.linspace(0.0, radius, radii)[1:]
    phi = 2 * np.pi * np.arange(angles) / angles
    ring = (r[:, None] * np.exp(1j * phi)).ravel()
    return complex(center) + np.concatenate(([0.0], ring))


@dataclass
class PoissonCheck:
    lam: complex
    n: np.ndarray
    sup: np.ndarray

    @property
    def scaled(self):
        return self.n * self.sup

    @property
    def band(self):
        """``max / min`` of ``n * sup``; ``nan`` when the deviation vanishes."""
        s = self.scaled
        return float(s.max() / s.min()) if s.min() > 0 else math.nan


def poisson_example_check(lam, n_list, radii=5, angles=8, real_only=False, tol=DEFAULT_TOL):
    """``sup |delta_n(u, v)|`` over ``|u|, |v| <= 1`` for the Poisson weight.

    ``z1 = e^{u/n}``, ``z2 = e^{v/n}``, ``zeta = 1``.  ``u`` and ``v`` run
    over a polar grid of the unit disk, or over ``[-1, 1]`` when
    ``real_only`` is set.
    """
    lam = complex(lam)
    if not abs(lam) < 1:
        raise InvalidParameterError("need |lambda| < 1")
    w = make_weight("lebesgue") if lam == 0 else make_weight("poisson", lam)
    n_list = np.asarray(sorted(n_list), dtype=int)
    v = verblunsky_for(w, int(n_list.max()), tol)
    if real_only:
        u = np.linspace(-1.0, 1.0, 2 * radii + 1).astype(complex)
    else:
        u = disk_grid(0.0, 1.0, radii + 1, angles)
    sups = []
    for n in n_list:
        ctx = KernelContext(v.truncated(n - 1), int(n))
        z = np.exp(u / n)
        ratio, universal = deviation_matrix(ctx, 1.0, z, z)
        sups.append(float(np.abs(ratio - universal).max()))
    return PoissonCheck(lam, n_list, np.array(sups))


@dataclass
class Theorem1Report:
    weight: str
    zeta: complex
    A: float
    n: int
    lhs: float
    delta: float
    entropy_sup: float
    rhs_core: float
    empirical_ratio: Optional[float]
    grid: np.ndarray = field(repr=False)

    @property
    def grid_size(self):
        return self.grid.size

    @property
    def consistent(self):
        """Zero entropy must come with zero deviation (up to rounding, ``16 n eps``)."""
        if self.entropy_sup > 0:
            return True
        return self.lhs <= 16 * self.n * np.finfo(float).eps


def theorem1_check(w, zeta, A, n, radii=17, angles=32, tol=DEFAULT_TOL, v=None):
    """Largest deviation over pairs in ``B(zeta, A/n)`` against the entropy bound.

    ``empirical_ratio = lhs / (e^{4A} sqrt(sup K))``, with the supremum of
    ``K(rho zeta)`` over ``rho`` in ``[1 - delta, 1)`` and
    ``delta = max |z - zeta|`` over the grid.  It is ``None`` when the
    entropy vanishes.
    """
    zeta = complex(zeta)
    if A < 1:
        raise InvalidParameterError("A must be at least 1")
    if n < 10 * A:
        raise InvalidParameterError("n must be at least 10 A")
    if abs(abs(zeta) - 1) > 1e-12:
        raise InvalidParameterError("zeta must lie on the unit circle")
    if v is None:
        v = verblunsky_for(w, int(n), tol)
    ctx = KernelContext(v.truncated(n - 1), int(n))
    pts = disk_grid(zeta, A / n, radii, angles)
    ratio, universal = deviation_matrix(ctx, zeta, pts, pts)
    lhs = float(np.abs(ratio - universal).max())
    delta = float(np.abs(pts - zeta).max())
    ksup = entropy_sup_on_radius(w, zeta, 1.0 - delta)
    rhs = math.exp(4 * A) * math.sqrt(ksup)
    emp = lhs / rhs if rhs > 0 else None
    return Theorem1Report(w.label, zeta, float(A), int(n), lhs, delta, ksup, rhs, emp, pts)


def theorem1_sweep(w, zeta, A, n_list, **kwargs):
    """:func:`theorem1_check` over several ``n`` sharing one Levinson run."""
    n_list = sorted(int(n) for n in n_list)
    v = verblunsky_for(w, n_list[-1], kwargs.pop("tol", DEFAULT_TOL))
    return [theorem1_check(w, zeta, A, n, v=v, **kwargs) for n in n_list]
