"""Entropy function of a circle weight and its radial scaling.

For ``mu = w dm`` the entropy at ``z`` in the disk is

    K(z) = log P[w](z) - P[log w](z),

with ``P`` the Poisson extension.  It is non-negative by Jensen's inequality
and vanishes identically for constant weights.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InsufficientSpanError, InvalidParameterError, NegativeEntropyError
from .measures import wrap_angle
from .quadrature import graded_breakpoints, integrate_panels

DEFAULT_TOL = 1e-13
NEGATIVE_SLACK = 1e-10


def poisson_kernel(theta, z):
    """``(1 - |z|^2) / |1 - e^{-i theta} z|^2``.

    The denominator is formed as ``(1 - r)^2 + 4 r sin^2((theta - arg z) / 2)``,
    which keeps full relative accuracy at the peak.
    """
    r = abs(z)
    half = 0.5 * (np.asarray(theta) - np.angle(z))
    return (1.0 - r) * (1.0 + r) / ((1.0 - r) ** 2 + 4.0 * r * np.sin(half) ** 2)


def poisson_breakpoints(z, singular_points=(), cusps=True):
    """Mesh for a Poisson integral at ``z``.

    The panels are geometrically refined towards ``arg z`` down to
    ``(1 - |z|) / 64``, and towards each singular point when ``cusps`` is
    set.  The mesh spans one period starting at ``arg z - pi``.
    """
    r = abs(z)
    peak = float(np.angle(z)) if r > 0 else 0.0
    lo, hi = peak - np.pi, peak + np.pi
    pts = [lo, hi]
    if r > 0.5:
        eps = 1.0 - r
        pts.extend(graded_breakpoints(peak, np.pi, eps / 64, ratio=0.5))
        pts.extend(graded_breakpoints(peak, -np.pi, eps / 64, ratio=0.5))
    for s in singular_points:
        s = peak + float(wrap_angle(s - peak))
        if cusps:
            pts.extend(graded_breakpoints(s, np.pi / 4, 1e-15))
            pts.extend(graded_breakpoints(s, -np.pi / 4, 1e-15))
        else:
            pts.append(s)
    pts = np.asarray(pts)
    return np.unique(np.clip(pts, lo, hi))


def poisson_integral(f, z, singular_points=(), tol=DEFAULT_TOL, cusps=True):
    """``\\int f(xi) (1 - |z|^2) / |1 - conj(xi) z|^2 dm(xi)`` for ``|z| < 1``.

    ``f`` takes angles; it is only ever called with wrapped angles.
    """
    z = complex(z)
    if not abs(z) < 1:
        raise InvalidParameterError(f"Poisson integral needs |z| < 1, got {z!r}")
    edges = poisson_breakpoints(z, singular_points, cusps)

    def integrand(t):
        return f(wrap_angle(t)) * poisson_kernel(t, z)

    value, _ = integrate_panels(integrand, edges, rtol=tol, max_width=np.pi / 8)
    return float(np.real(value)) / (2 * np.pi)


def entropy_terms(w, z, tol=DEFAULT_TOL):
    """``(log P[w](z), P[log w](z))``."""
    if w.kind == "lebesgue":
        # constant weight: both terms are log(scale), exactly
        level = float(np.log(w.scale))
        return level, level
    cusps = w.samples is None
    pts = w.singular_points if cusps else w.samples[0]
    mass = poisson_integral(w, z, pts, tol, cusps)
    mean_log = poisson_integral(w.log, z, pts, tol, cusps)
    return np.log(mass), mean_log


def entropy_at(w, z, tol=DEFAULT_TOL):
    """``K_w(z)``; values in ``[-1e-10, 0)`` are reported as 0.

    Raises
    ------
    NegativeEntropyError
        If the result is below ``-1e-10``.
    """
    log_mass, mean_log = entropy_terms(w, z, tol)
    k = log_mass - mean_log
    if k < 0:
        if k < -NEGATIVE_SLACK:
            raise NegativeEntropyError(
                f"entropy {k:.3g} < 0 at z = {complex(z)!r}", log_mass, mean_log)
        k = 0.0
    return float(k)


def entropy_sup_on_radius(w, zeta, rho_min, tol=DEFAULT_TOL, depth=1e-3, rtol=1e-3,
                          max_points=257):
    """``sup K(rho zeta)`` over ``rho`` in ``[rho_min, 1)``.

    The scan uses radii with ``1 - rho`` geometrically spaced from
    ``1 - rho_min`` down to ``depth * (1 - rho_min)``.  The grid is doubled
    until the supremum changes by less than ``rtol``.
    """
    if not 0 < rho_min < 1:
        raise InvalidParameterError("rho_min must lie in (0, 1)")
    zeta = complex(zeta)
    top = 1.0 - rho_min
    points = 9
    cache = {}

    def value(gap):
        if gap not in cache:
            cache[gap] = entropy_at(w, (1.0 - gap) * zeta, tol)
        return cache[gap]

    best = None
    while True:
        gaps = top * np.geomspace(1.0, depth, points)
        cur = max(value(g) for g in gaps)
        if best is not None and abs(cur - best) <= rtol * max(abs(cur), 1e-300):
            return cur
        if cur == 0.0 and best == 0.0:
            return 0.0
        best = cur
        if points >= max_points:
            return cur
        points = 2 * points - 1


@dataclass
class EntropyProfile:
    """``K(rho_i zeta)`` on a grid of radii, plus fitted scaling models."""

    zeta: complex
    rho: np.ndarray
    values: np.ndarray
    fits: dict = field(default_factory=dict)

    @property
    def gap(self):
        return 1.0 - self.rho

    def predictions(self, model):
        beta, c, _ = self.fits[model]
        return c * _model_x(self.gap, model) ** beta


def entropy_profile(w, zeta=1.0, gaps=None, tol=DEFAULT_TOL, threads=1):
    """Evaluate ``K`` at ``rho = 1 - gap`` for each gap (default: 25 radii,
    ``1 - rho`` from ``1e-1`` down to ``1e-4``).

    With ``threads > 1`` the radii are evaluated by a thread pool; the
    values come back in grid order either way.
    """
    if gaps is None:
        gaps = np.geomspace(1e-1, 1e-4, 25)
    gaps = np.asarray(gaps, dtype=float)
    zeta = complex(zeta)

    def one(g):
        return entropy_at(w, (1.0 - g) * zeta, tol)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            vals = np.array(list(pool.map(one, gaps)))
    else:
        vals = np.array([one(g) for g in gaps])
    return EntropyProfile(zeta, 1.0 - gaps, vals)


def _model_x(gap, model):
    if model == "plain":
        return gap
    if model == "log-corrected":
        return gap * np.abs(np.log(gap))
    raise InvalidParameterError(f"unknown model {model!r}")


def fit_entropy_exponent(profile, model="plain"):
    """Least-squares fit of ``K = C x^beta``.

    ``x`` is ``1 - rho`` for the plain model and ``(1 - rho)|log(1 - rho)|``
    for the log-corrected one.  The result is also stored in
    ``profile.fits[model]``.

    Returns
    -------
    beta, C, residual : float
        ``residual`` is the largest relative misfit ``|K - C x^beta| / K``.
    """
    gap = profile.gap
    k = np.asarray(profile.values, dtype=float)
    if gap.size < 8:
        raise InsufficientSpanError(f"need at least 8 radii, got {gap.size}")
    if np.log10(gap.max() / gap.min()) < 2 - 1e-9:
        raise InsufficientSpanError("1 - rho must span at least two decades")
    if np.any(k <= 0):
        raise InsufficientSpanError("entropy values must be positive to fit a power law")
    x = _model_x(gap, model)
    beta, logc = np.polyfit(np.log(x), np.log(k), 1)
    c = float(np.exp(logc))
    residual = float(np.max(np.abs(k - c * x ** beta) / k))
    profile.fits[model] = (float(beta), c, residual)
    return float(beta), c, residual
