"""Panel Gauss-Legendre quadrature on intervals of the circle.

Two pieces of machinery live here:

* :func:`integrate_panels` -- adaptive bisection with a pair of fixed
  Gauss-Legendre orders per panel, vectorised over panels.
* :func:`graded_breakpoints` -- geometric meshes that resolve cusps such as
  ``|theta|**s`` or the ``(1 - rho)``-wide peak of a Poisson kernel.
"""
from functools import lru_cache

import numpy as np

from .errors import QuadratureError

EPS = np.finfo(float).eps

LOW_ORDER = 12
HIGH_ORDER = 16


@lru_cache(maxsize=None)
def gauss_legendre_unit(order):
    """Nodes and weights of the ``order``-point rule mapped to ``[0, 1]``.

    The weights sum to one.
    """
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def panel_nodes(edges, order):
    """Nodes and weights of a composite rule on consecutive ``edges``.

    Returns arrays of shape ``(len(edges) - 1, order)``.
    """
    edges = np.asarray(edges, dtype=float)
    t, wt = gauss_legendre_unit(order)
    left = edges[:-1, None]
    width = np.diff(edges)[:, None]
    return left + width * t, width * wt


def graded_breakpoints(center, reach, finest, ratio=0.15):
    """Breakpoints clustering geometrically towards ``center``.

    Produces ``center + reach * ratio**k`` for ``k = 0, 1, ...`` until the
    offset drops below ``finest``, together with ``center`` itself.  A
    negative ``reach`` grades from the left.
    """
    if reach == 0.0:
        return np.array([center])
    levels = max(1, int(np.ceil(np.log(finest / abs(reach)) / np.log(ratio))))
    offsets = reach * ratio ** np.arange(levels + 1)
    return np.concatenate(([center], center + offsets[::-1]))


def integrate_panels(func, breakpoints, rtol=1e-13, atol=0.0, max_panels=200_000,
                     max_width=None):
    """Adaptive integral of a vectorised ``func`` over sorted ``breakpoints``.

    Every panel is integrated with two Gauss-Legendre orders; the difference
    is the panel error estimate.  Panels whose estimate exceeds their share of
    the tolerance are bisected until the total estimate is at most
    ``max(atol, rtol * integral of |func|)``.

    Returns
    -------
    value : float or complex
    error : float
        Sum of panel error estimates of the returned (higher order) result.

    Raises
    ------
    QuadratureError
        If refinement needs more than ``max_panels`` panels.
    """
    edges = np.unique(np.asarray(breakpoints, dtype=float))
    if max_width is not None:
        edges = _split_wide(edges, max_width)
    accepted_value = 0.0
    accepted_error = 0.0
    accepted_abs = 0.0
    total = edges[-1] - edges[0]
    lo = edges[:-1]
    hi = edges[1:]
    while True:
        val_lo, val_hi, absval = _panel_pair(func, lo, hi)
        err = np.abs(val_hi - val_lo)
        scale = accepted_abs + absval.sum()
        target = max(atol, rtol * scale, 16 * EPS * scale)
        # Tiny panels at a cusp may keep an absolute floor instead of a
        # length-proportional share; no panel is held below its own rounding.
        share = np.maximum(target * (hi - lo) / total, 1e-3 * target / lo.size)
        share = np.maximum(share, 64 * EPS * absval)
        bad = err > share
        accepted_value = accepted_value + val_hi[~bad].sum()
        accepted_error += err[~bad].sum()
        accepted_abs += absval[~bad].sum()
        if not bad.any():
            return accepted_value, accepted_error
        lo, hi = lo[bad], hi[bad]
        too_small = np.any(hi - lo <= 8 * EPS * np.maximum(np.abs(lo), np.abs(hi)))
        if 2 * lo.size > max_panels or too_small:
            raise QuadratureError(
                "adaptive quadrature failed to converge",
                achieved=float(accepted_error + err[bad].sum()),
            )
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate((lo, mid)), np.concatenate((mid, hi))


def _split_wide(edges, max_width):
    pieces = [edges[:1]]
    for a, b in zip(edges[:-1], edges[1:]):
        k = max(1, int(np.ceil((b - a) / max_width)))
        pieces.append(np.linspace(a, b, k + 1)[1:])
    return np.concatenate(pieces)


def _panel_pair(func, lo, hi):
    out = []
    for order in (LOW_ORDER, HIGH_ORDER):
        t, wt = gauss_legendre_unit(order)
        width = (hi - lo)[:, None]
        x = lo[:, None] + width * t
        fx = func(x)
        out.append(((width * wt) * fx).sum(axis=1))
        if order == HIGH_ORDER:
            absval = ((width * wt) * np.abs(fx)).sum(axis=1)
    return out[0], out[1], absval
