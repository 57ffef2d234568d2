"""Absolutely continuous weights on the unit circle and their moments.

Angles live in ``[-pi, pi]`` and densities are taken with respect to the
normalised arc length ``dm = dtheta / (2 pi)``.  Moments follow the
convention

    c_j = \\int \\bar{xi}^j w(xi) dm(xi),

so that the Toeplitz matrix ``T[j, k] = c_{j-k}`` is the Gram matrix of the
monomials and the Poisson weight with parameter ``lam`` has ``c_j = lam**j``.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .errors import InvalidParameterError, NormalizationError, QuadratureError
from .quadrature import (EPS, HIGH_ORDER, LOW_ORDER, gauss_legendre_unit,
                         graded_breakpoints, integrate_panels)

DEFAULT_TOL = 1e-12
KINDS = ("lebesgue", "poisson", "holder", "custom", "samples")


def wrap_angle(theta):
    """Map angles to ``[-pi, pi)``, leaving in-range angles bit-for-bit intact."""
    theta = np.asarray(theta, dtype=float)
    inside = (theta >= -np.pi) & (theta < np.pi)
    return np.where(inside, theta, np.mod(theta + np.pi, 2 * np.pi) - np.pi)


@dataclass(frozen=True, eq=False)
class CircleWeight:
    """A positive density ``w(e^{i theta})`` on the circle.

    ``density`` and ``log_density`` describe the unscaled shape; the public
    value is ``scale * density``.  ``singular_points`` lists the angles where
    the density is not smooth, and quadrature places panel edges there.
    """

    kind: str
    params: tuple
    density: Callable[[np.ndarray], np.ndarray]
    log_density: Optional[Callable[[np.ndarray], np.ndarray]] = None
    singular_points: tuple = ()
    symmetric: bool = False
    scale: float = 1.0
    normalized: bool = False
    samples: Optional[tuple] = field(default=None, repr=False)

    def __call__(self, theta):
        return self.scale * self.density(wrap_angle(theta))

    def log(self, theta):
        """``log w(theta)``, evaluated analytically when the family allows."""
        theta = wrap_angle(theta)
        if self.log_density is not None:
            return np.log(self.scale) + self.log_density(theta)
        return np.log(self.scale * self.density(theta))

    @property
    def label(self):
        if self.kind == "lebesgue":
            return "lebesgue"
        if self.kind in ("poisson", "holder"):
            return f"{self.kind}:{':'.join(repr(p) for p in self.params)}"
        return self.kind

    @property
    def key(self):
        """Hashable identity used by the moment cache."""
        if self.kind in ("custom", "samples"):
            return (self.kind, id(self.density), self.scale)
        return (self.kind, self.params, self.scale)

    def scaled(self, factor):
        """The weight multiplied by a positive constant."""
        if not factor > 0:
            raise InvalidParameterError("scale factor must be positive")
        return replace(self, scale=self.scale * factor, normalized=False)


@dataclass(frozen=True)
class MomentSequence:
    """Trigonometric moments ``c_0 .. c_{n-1}`` with per-moment error estimates."""

    c: np.ndarray
    err: np.ndarray
    normalized: bool = False

    @property
    def n(self):
        return self.c.size

    def toeplitz(self, size=None):
        """Hermitian Toeplitz matrix ``T[j, k] = c_{j-k}``."""
        c = self.c if size is None else self.c[:size]
        return scipy.linalg.toeplitz(c, np.conj(c))

    def __getitem__(self, item):
        if isinstance(item, slice):
            return MomentSequence(self.c[item], self.err[item], self.normalized)
        return self.c[item]


# --- weight families ---------------------------------------------------------

def _lebesgue():
    return CircleWeight(
        kind="lebesgue", params=(), density=lambda t: np.ones_like(t),
        log_density=lambda t: np.zeros_like(t), symmetric=True, normalized=True,
    )


def _poisson(lam):
    lam = complex(lam)
    if not abs(lam) < 1:
        raise InvalidParameterError(f"poisson weight needs |lambda| < 1, got {lam!r}")
    mass = 1.0 - abs(lam) ** 2

    def density(t):
        return mass / np.abs(1.0 - lam * np.exp(1j * t)) ** 2

    def log_density(t):
        return np.log(mass) - 2.0 * np.log(np.abs(1.0 - lam * np.exp(1j * t)))

    param = lam.real if lam.imag == 0 else lam
    return CircleWeight(
        kind="poisson", params=(param,), density=density, log_density=log_density,
        symmetric=lam.imag == 0, normalized=True,
    )


def _holder(s):
    s = float(s)
    if not s > 0:
        raise InvalidParameterError(f"holder weight needs s > 0, got {s!r}")

    def log_density(t):
        return np.abs(t) ** s

    return CircleWeight(
        kind="holder", params=(s,), density=lambda t: np.exp(np.abs(t) ** s),
        log_density=log_density, singular_points=(0.0,), symmetric=True,
    )


def make_weight(kind, *params, normalize=True, func=None, log_func=None,
                singular_points=(), symmetric=False, tol=DEFAULT_TOL):
    """Build a weight of one of the supported families.

    Parameters
    ----------
    kind : {'lebesgue', 'poisson', 'holder', 'custom'}
        ``poisson`` takes ``lam`` with ``|lam| < 1`` and gives
        ``(1 - |lam|^2) / |1 - lam e^{i theta}|^2``.  ``holder`` takes
        ``s > 0`` and gives ``c_s exp(|theta|^s)``.  ``custom`` uses ``func``
        (vectorised, angles in ``[-pi, pi)``).
    normalize : bool
        Rescale to unit mass.  The Lebesgue and Poisson families already have
        unit mass and are never touched.

    Examples
    --------
    >>> w = make_weight("poisson", 0.5)
    >>> float(w(np.array(0.0)))
    3.0
    """
    if kind == "lebesgue":
        w = _lebesgue()
    elif kind == "poisson":
        if len(params) != 1:
            raise InvalidParameterError("poisson weight takes exactly one parameter")
        w = _poisson(params[0])
    elif kind == "holder":
        if len(params) != 1:
            raise InvalidParameterError("holder weight takes exactly one parameter")
        w = _holder(params[0])
    elif kind == "custom":
        if func is None:
            raise InvalidParameterError("custom weight needs func")
        w = CircleWeight(
            kind="custom", params=(), density=func, log_density=log_func,
            singular_points=tuple(float(p) for p in np.atleast_1d(wrap_angle(singular_points))),
            symmetric=symmetric,
        )
    else:
        raise InvalidParameterError(f"unknown weight kind {kind!r}")
    if normalize and not w.normalized:
        w = normalize_weight(w, tol=tol)
    return w


def weight_from_samples(theta, values, normalize=True):
    """Periodic piecewise-linear weight through samples ``(theta_i, w_i)``.

    The interpolant is only an approximation of whatever produced the
    samples.  Its moments are computed in closed form.
    """
    theta = wrap_angle(theta)
    values = np.asarray(values, dtype=float)
    if theta.shape != values.shape or theta.size < 3:
        raise InvalidParameterError("need at least three (theta, w) samples")
    if np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise InvalidParameterError("sampled weight must be finite and positive")
    order = np.argsort(theta)
    theta, values = theta[order], values[order]
    if np.any(np.diff(theta) <= 0):
        raise InvalidParameterError("sample angles must be distinct modulo 2 pi")
    xp = np.concatenate((theta, [theta[0] + 2 * np.pi]))
    fp = np.concatenate((values, [values[0]]))

    def density(t):
        t = np.asarray(t, dtype=float)
        shifted = np.where(t < theta[0], t + 2 * np.pi, t)
        return np.interp(shifted, xp, fp)

    w = CircleWeight(kind="samples", params=(), density=density,
                     singular_points=tuple(theta), samples=(theta, values))
    return normalize_weight(w) if normalize else w


# --- quadrature --------------------------------------------------------------

def weight_mass(w, tol=DEFAULT_TOL):
    """``\\int w dm`` and its error estimate."""
    if w.samples is not None:
        c, err = _sampled_moments(w, 1)
        return float(c[0].real), float(err[0])
    edges = _mass_breakpoints(w)
    val, err = integrate_panels(lambda t: w(t), edges, rtol=tol)
    return float(np.real(val)) / (2 * np.pi), float(err) / (2 * np.pi)


def _mass_breakpoints(w):
    pts = [-np.pi, np.pi]
    for s in w.singular_points:
        pts.extend(graded_breakpoints(s, np.pi / 4, 1e-15))
        pts.extend(graded_breakpoints(s, -np.pi / 4, 1e-15))
    pts = np.clip(pts, -np.pi, np.pi)
    return np.unique(pts)


def normalize_weight(w, tol=DEFAULT_TOL):
    """Rescale ``w`` so that ``\\int w dm = 1``.

    Raises
    ------
    NormalizationError
        If the computed mass is not finite and positive.
    """
    if w.normalized:
        return w
    try:
        mass, _ = weight_mass(w, tol=tol)
    except QuadratureError as exc:
        raise NormalizationError(f"could not integrate {w.label}: {exc}") from exc
    if not (np.isfinite(mass) and mass > 0):
        raise NormalizationError(f"weight {w.label} has mass {mass!r}")
    return replace(w, scale=w.scale / mass, normalized=True)


def compute_moments(w, n, tol=DEFAULT_TOL, max_panels=2 ** 21):
    """Moments ``c_j = \\int \\bar{xi}^j w dm`` for ``j < n``.

    Uniform panels of width at most ``pi / (4 n)`` cover ``[-pi, pi]``; their
    contribution to all ``c_j`` at once is one FFT per Gauss node.  Panels
    touching a singular point are replaced by meshes graded towards it.  The
    panel count doubles until the difference between a 12- and a 16-point
    rule is below ``tol * c_0`` for every ``j``.

    Returns
    -------
    MomentSequence
        ``err`` holds the per-moment estimate (the 12 vs 16 point difference
        plus a rounding floor).

    Raises
    ------
    QuadratureError
        With the worst index and its achieved estimate.
    """
    n = int(n)
    if n < 1:
        raise InvalidParameterError("need at least one moment")
    if not tol > 0:
        raise InvalidParameterError("tol must be positive")
    if w.samples is not None:
        c, err = _sampled_moments(w, n)
        return MomentSequence(c, err, w.normalized)

    panels = 64
    while panels < 8 * (n + 1):
        panels *= 2
    sing = np.asarray(w.singular_points, dtype=float)
    while True:
        lo_c, hi_c, absmass = _moments_fft(w, n, panels, sing)
        trunc = np.abs(hi_c - lo_c)
        floor = 64 * EPS * absmass * np.sqrt(np.log2(panels))
        if np.all(trunc <= max(tol * abs(hi_c[0]), floor)):
            break
        if panels >= max_panels:
            worst = int(np.argmax(trunc))
            raise QuadratureError(
                f"moment {worst} of {w.label} did not converge",
                index=worst, achieved=float(trunc[worst]),
            )
        panels *= 2
    c = hi_c
    if w.symmetric:
        c = c.real.astype(complex)
    return MomentSequence(c, trunc + floor, w.normalized)


def _moments_fft(w, n, panels, sing):
    h = 2 * np.pi / panels
    j = np.arange(n)
    # Uniform panels hit by a singular point are handled separately.
    hit = set()
    for s in sing:
        p = (s + np.pi) / h
        k = int(np.floor(p))
        if abs(p - round(p)) < 1e-9:
            k = int(round(p))
            hit.update({(k - 1) % panels, k % panels})
        else:
            hit.add(k % panels)
    hit = np.array(sorted(hit), dtype=int)
    left = -np.pi + h * np.arange(panels)

    results = []
    absmass = 0.0
    for order in (LOW_ORDER, HIGH_ORDER):
        t, wt = gauss_legendre_unit(order)
        x = left[:, None] + h * t
        fx = w(x)
        if hit.size:
            fx[hit] = 0.0
        # sum_p f[p, q] exp(-2 pi i j p / P) for every node column q
        spec = np.fft.fft(fx, axis=0)[j % panels]
        phase = np.exp(-1j * np.outer(j, h * t))
        acc = (spec * phase) @ wt * (h / (2 * np.pi)) * np.where(j % 2, -1.0, 1.0)
        if hit.size:
            xs, ws = _graded_nodes(w, left[hit], h, sing, order)
            fs = ws * w(xs)
            acc = acc + _direct_sum(xs, fs, n) / (2 * np.pi)
            if order == HIGH_ORDER:
                absmass = (np.abs(fx) @ wt).sum() * h / (2 * np.pi) + np.abs(fs).sum() / (2 * np.pi)
        elif order == HIGH_ORDER:
            absmass = (np.abs(fx) @ wt).sum() * h / (2 * np.pi)
        results.append(acc)
    return results[0], results[1], absmass


def _graded_nodes(w, lefts, h, sing, order):
    edges = []
    for a in lefts:
        b = a + h
        inside = sorted(s + k for s in sing for k in (-2 * np.pi, 0.0, 2 * np.pi)
                        if a - 1e-12 <= s + k <= b + 1e-12)
        cuts = [a] + [min(max(s, a), b) for s in inside] + [b]
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            if hi - lo <= 0:
                continue
            pts = [lo, hi]
            if any(abs(lo - s) < 1e-12 for s in inside):
                pts.extend(graded_breakpoints(lo, hi - lo, 1e-16 * max(1.0, abs(lo))))
            if any(abs(hi - s) < 1e-12 for s in inside):
                pts.extend(graded_breakpoints(hi, lo - hi, 1e-16 * max(1.0, abs(hi))))
            edges.append(np.unique(np.clip(pts, lo, hi)))
    xs, ws = [], []
    t, wt = gauss_legendre_unit(order)
    for e in edges:
        width = np.diff(e)[:, None]
        xs.append((e[:-1, None] + width * t).ravel())
        ws.append((width * wt).ravel())
    return np.concatenate(xs), np.concatenate(ws)


def _direct_sum(x, fw, n, block=512):
    out = np.empty(n, dtype=complex)
    for start in range(0, n, block):
        jj = np.arange(start, min(n, start + block))
        out[start:start + jj.size] = np.exp(-1j * np.outer(jj, x)) @ fw
    return out


def _sampled_moments(w, n):
    # w'' is a sum of slope jumps, so c_j = -sum_k jump_k e^{-i j theta_k} / (2 pi j^2).
    theta, values = w.samples
    values = w.scale * values
    xp = np.concatenate((theta, [theta[0] + 2 * np.pi]))
    fp = np.concatenate((values, [values[0]]))
    slopes = np.diff(fp) / np.diff(xp)
    jumps = slopes - np.roll(slopes, 1)
    c = np.empty(n, dtype=complex)
    c[0] = 0.5 * np.sum(np.diff(xp) * (fp[:-1] + fp[1:])) / (2 * np.pi)
    if n > 1:
        j = np.arange(1, n)
        c[1:] = -_direct_sum(theta, jumps, n)[1:] / (2 * np.pi * j ** 2)
    err = 64 * EPS * np.abs(values).max() * np.ones(n)
    return c, err


class MomentCache:
    """Thread-safe store of the longest moment sequence per (weight, tol).

    Shorter requests are served as prefixes; a longer request computes the
    sequence afresh and replaces the stored one.
    """

    def __init__(self):
        self._data = {}
        self._lock = threading.Lock()

    def get(self, w, n, tol=DEFAULT_TOL):
        key = (w.key, tol)
        with self._lock:
            have = self._data.get(key)
            if have is not None and have.n >= n:
                return have[:n]
        fresh = compute_moments(w, n, tol)
        with self._lock:
            have = self._data.get(key)
            if have is None or have.n < fresh.n:
                self._data[key] = fresh
        return fresh

    def clear(self):
        with self._lock:
            self._data.clear()


moment_cache = MomentCache()


def parse_weight(spec, normalize=True):
    """Weight from a spec string: ``lebesgue``, ``poisson:0.5``, ``holder:0.4``
    or ``file:PATH`` (two columns ``theta, w``, comma separated, ``#`` comments).
    """
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    if name == "lebesgue" and not arg:
        return make_weight("lebesgue")
    if name in ("poisson", "holder"):
        try:
            value = complex(arg) if name == "poisson" else float(arg)
        except ValueError:
            raise InvalidParameterError(f"bad parameter in weight spec {spec!r}") from None
        if isinstance(value, complex) and value.imag == 0:
            value = value.real
        return make_weight(name, value, normalize=normalize)
    if name == "file" and arg:
        data = np.loadtxt(arg, delimiter=",", comments="#", ndmin=2)
        return weight_from_samples(data[:, 0], data[:, 1], normalize=normalize)
    raise InvalidParameterError(f"unrecognised weight spec {spec!r}")
