"""Verblunsky coefficients and orthonormal polynomials on the unit circle.

Polynomials are stored as ascending coefficient vectors, ``p[k]`` being the
coefficient of ``z**k``.  The recursion used throughout is

    phi_{k+1}  = (z phi_k - conj(a_k) phi_k^*) / rho_k
    phi_{k+1}^* = (phi_k^* - a_k z phi_k) / rho_k,   rho_k = sqrt(1 - |a_k|^2)

with ``phi_0 = phi_0^* = kappa_0 = c_0**-0.5``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import InvalidParameterError, NotPositiveDefiniteError, NumericalError
from .measures import MomentSequence

BREAKDOWN = 1e-13
MAX_MATERIALIZED = 1024


@dataclass(frozen=True)
class VerblunskyCoefficients:
    """Recurrence coefficients ``a_0 .. a_{n-1}`` and leading coefficients
    ``kappa_0 .. kappa_n`` of the orthonormal polynomials.

    ``residual`` is ``max |T x - e|`` for the last monic polynomial scaled as a
    Toeplitz solution, when it was computed from moments.
    """

    a: np.ndarray
    kappa: np.ndarray
    residual: Optional[float] = None

    @property
    def n(self):
        return self.a.size

    @property
    def rho(self):
        return np.sqrt(1.0 - np.abs(self.a) ** 2)

    def truncated(self, n):
        return VerblunskyCoefficients(self.a[:n], self.kappa[:n + 1], self.residual)

    @classmethod
    def from_coefficients(cls, a, c0=1.0):
        """Build from raw coefficients, deriving ``kappa`` from ``c0``."""
        a = np.asarray(a, dtype=complex)
        if np.any(np.abs(a) >= 1.0):
            k = int(np.argmax(np.abs(a) >= 1.0))
            raise NotPositiveDefiniteError(f"|a_{k}| >= 1", k)
        kappa = np.empty(a.size + 1)
        kappa[0] = c0 ** -0.5
        kappa[1:] = kappa[0] / np.cumprod(np.sqrt(1.0 - np.abs(a) ** 2))
        return cls(a, kappa)


@dataclass(frozen=True)
class PolynomialPair:
    """Coefficients of ``phi_0 .. phi_n`` (rows of ``phi``) and of ``phi_n^*``."""

    phi: np.ndarray
    phi_star_n: np.ndarray

    @property
    def degree(self):
        return self.phi.shape[0] - 1

    def __getitem__(self, k):
        return self.phi[k, :k + 1]


def levinson(moments, compute_residual=True):
    """Verblunsky coefficients from moments ``c_0 .. c_{n-1}``.

    ``n`` moments determine ``a_0 .. a_{n-2}``.  Each step costs one inner
    product with the current monic polynomial, so the total work is
    ``O(n^2)``.

    Raises
    ------
    NotPositiveDefiniteError
        If some ``|a_k| >= 1 - 1e-13``, or ``c_0 <= 0``; the index of the
        first failing coefficient is attached.
    """
    c = np.asarray(moments.c if isinstance(moments, MomentSequence) else moments,
                   dtype=complex)
    if c.size < 1:
        raise InvalidParameterError("need at least one moment")
    c0 = c[0].real
    if not c0 > 0 or abs(c[0].imag) > 1e-10 * abs(c0):
        raise NotPositiveDefiniteError("c_0 must be real and positive", -1)
    n = c.size - 1
    a = np.empty(n, dtype=complex)
    energy = np.empty(n + 1)
    energy[0] = c0
    cc = np.conj(c)
    monic = np.zeros(n + 1, dtype=complex)
    monic[0] = 1.0
    for k in range(n):
        # <z Phi_k, 1> = sum_m Phi_k[m] conj(c_{m+1})
        num = np.dot(monic[:k + 1], cc[1:k + 2])
        ak = np.conj(num) / energy[k]
        if not abs(ak) < 1.0 - BREAKDOWN:
            raise NotPositiveDefiniteError(
                f"moments are not positive definite: |a_{k}| = {abs(ak):.17g}", k)
        a[k] = ak
        rev = np.conj(monic[k::-1])
        monic[1:k + 2] = monic[:k + 1].copy()
        monic[0] = 0.0
        monic[:k + 1] -= np.conj(ak) * rev
        energy[k + 1] = energy[k] * (1.0 - abs(ak) ** 2)
        if not energy[k + 1] > 0:
            raise NumericalError(f"Levinson breakdown at step {k}")
    kappa = energy ** -0.5
    residual = None
    if compute_residual:
        x = monic / energy[n]
        tx = scipy.linalg.matmul_toeplitz((c, cc), x)
        tx[n] -= 1.0
        residual = float(np.abs(tx).max())
    return VerblunskyCoefficients(a, kappa, residual)


def szego_polynomials(v, n=None, max_degree=MAX_MATERIALIZED):
    """Coefficient vectors of ``phi_0 .. phi_n`` and ``phi_n^*``.

    Only meant for moderate degrees; kernels never need these vectors.
    """
    n = v.n if n is None else int(n)
    if n > v.n:
        raise InvalidParameterError(f"only {v.n} coefficients available, asked for degree {n}")
    if n > max_degree:
        raise InvalidParameterError(f"degree {n} exceeds the materialisation limit {max_degree}")
    phi = np.zeros((n + 1, n + 1), dtype=complex)
    phi[0, 0] = v.kappa[0]
    star = np.zeros(n + 1, dtype=complex)
    star[0] = v.kappa[0]
    for k in range(n):
        ak = v.a[k]
        rho = np.sqrt(1.0 - abs(ak) ** 2)
        zphi = np.concatenate(([0.0], phi[k, :n]))
        phi[k + 1] = (zphi - np.conj(ak) * star) / rho
        star = (star - ak * zphi) / rho
    return PolynomialPair(phi, star)


def eval_poly(p, z):
    """Horner evaluation of ascending coefficients ``p`` at ``z``.

    >>> eval_poly([0, 0, 1], 1j)
    (-1+0j)
    """
    p = np.asarray(p)
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    for coef in p[::-1]:
        out = out * z + coef
    return out[()] if out.ndim == 0 else out


def reflect(p, degree):
    """``p^*(z) = z^degree * conj(p(1 / conj(z)))`` as a coefficient vector.

    >>> reflect([1, 2j, 3], 2)
    array([3.-0.j, 0.-2.j, 1.-0.j])
    """
    p = np.asarray(p, dtype=complex)
    if degree < 0:
        raise InvalidParameterError("degree must be non-negative")
    nonzero = np.flatnonzero(p)
    if nonzero.size and nonzero[-1] > degree:
        raise InvalidParameterError(f"polynomial has degree above {degree}")
    padded = np.zeros(degree + 1, dtype=complex)
    padded[:min(p.size, degree + 1)] = p[:degree + 1]
    return np.conj(padded[::-1])


def dense_orthonormal(moments, n):
    """Coefficients of ``phi_n`` by a dense solve ``T x = e_n``.

    This is the straightforward route kept as an independent check of
    :func:`levinson`; it uses ``n + 1`` moments and costs ``O(n^3)``.
    """
    c = np.asarray(moments.c if isinstance(moments, MomentSequence) else moments,
                   dtype=complex)[:n + 1]
    if c.size < n + 1:
        raise InvalidParameterError(f"need {n + 1} moments")
    t = scipy.linalg.toeplitz(c, np.conj(c))
    e = np.zeros(n + 1)
    e[n] = 1.0
    x = scipy.linalg.solve(t, e, assume_a="her")
    return x / np.sqrt(x[n].real)
