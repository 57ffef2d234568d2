"""Christoffel-Darboux kernels and their deviation from the universal ratio.

For a measure with orthonormal polynomials ``phi_k``,

    k_n(z1, z2) = sum_{k<n} conj(phi_k(z2)) phi_k(z1)
                = (conj(phi_n^*(z2)) phi_n^*(z1) - conj(phi_n(z2)) phi_n(z1))
                  / (1 - conj(z2) z1).

Both forms are evaluated with the running Szego recursion at the points
themselves, so a kernel of degree ``n`` costs ``O(n)`` per point and no
coefficient vectors are formed.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateKernelError, InvalidParameterError, KernelDomainError
from .opuc import VerblunskyCoefficients

CD_SWITCH = 1e-6
UNIVERSAL_SWITCH = 1e-8
MAX_A = 8.0


@dataclass(frozen=True)
class KernelContext:
    """Kernel of degree ``n`` (dimension ``n``) built on Verblunsky data.

    ``strategy`` is ``'sum'`` or ``'cd'``.  ``max_a`` bounds evaluation points
    to ``|z| <= exp(max_a / n)``.
    """

    v: VerblunskyCoefficients
    n: int
    strategy: str = "sum"
    max_a: float = MAX_A
    _diag: dict = field(default_factory=dict, compare=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameterError("kernel dimension must be at least 1")
        if self.strategy not in ("sum", "cd"):
            raise InvalidParameterError(f"unknown strategy {self.strategy!r}")
        need = self.n if self.strategy == "cd" else self.n - 1
        if self.v.n < need:
            raise InvalidParameterError(
                f"{self.strategy}-form of dimension {self.n} needs {need} coefficients, "
                f"got {self.v.n}")

    def diagonal(self, zeta):
        """``k_n(zeta, zeta)``, cached per point."""
        key = complex(zeta)
        with self._lock:
            if key in self._diag:
                return self._diag[key]
        value = float(np.real(cd_kernel(self, key, key)))
        if not value > 0:
            raise DegenerateKernelError(f"k_n(zeta, zeta) = {value!r} at zeta = {key!r}")
        with self._lock:
            self._diag.setdefault(key, value)
        return value


@dataclass(frozen=True)
class DeviationSample:
    zeta: complex
    z1: complex
    z2: complex
    n: int
    ratio: complex
    universal: complex

    @property
    def deviation(self):
        return abs(self.ratio - self.universal)


def szego_step(phi, phi_star, a, z):
    """One recursion step with an arbitrary parameter ``a`` in the disk."""
    rho = np.sqrt(1.0 - abs(a) ** 2)
    zphi = z * phi
    return (zphi - np.conj(a) * phi_star) / rho, (phi_star - a * zphi) / rho


def szego_values(v, z, n):
    """``(phi_n(z), phi_n^*(z))`` by the recursion, vectorised over ``z``."""
    z = np.asarray(z, dtype=complex)
    if n > v.n:
        raise InvalidParameterError(f"degree {n} needs {n} coefficients, got {v.n}")
    phi = np.full(z.shape, v.kappa[0], dtype=complex)
    star = phi.copy()
    a, rho = v.a, v.rho
    for k in range(n):
        zphi = z * phi
        phi, star = (zphi - np.conj(a[k]) * star) / rho[k], (star - a[k] * zphi) / rho[k]
    return phi, star


def szego_table(v, z, n):
    """Matrix of ``phi_k(z_i)``, shape ``(len(z), n)``, for ``k < n``."""
    z = np.asarray(z, dtype=complex).ravel()
    if n - 1 > v.n:
        raise InvalidParameterError(f"need {n - 1} coefficients, got {v.n}")
    out = np.empty((z.size, n), dtype=complex)
    phi = np.full(z.shape, v.kappa[0], dtype=complex)
    star = phi.copy()
    a, rho = v.a, v.rho
    for k in range(n):
        out[:, k] = phi
        if k + 1 < n:
            zphi = z * phi
            phi, star = (zphi - np.conj(a[k]) * star) / rho[k], (star - a[k] * zphi) / rho[k]
    return out


def _check_domain(ctx, *zs):
    bound = np.exp(ctx.max_a / ctx.n)
    for z in zs:
        if np.any(np.abs(z) > bound * (1 + 1e-12)):
            raise KernelDomainError(
                f"|z| = {np.abs(z).max():.6g} exceeds exp({ctx.max_a}/{ctx.n}) = {bound:.6g}")


def _sum_form(v, z1, z2, n):
    p1 = np.full(z1.shape, v.kappa[0], dtype=complex)
    s1 = p1.copy()
    p2 = np.full(z2.shape, v.kappa[0], dtype=complex)
    s2 = p2.copy()
    acc = np.zeros(np.broadcast(z1, z2).shape, dtype=complex)
    a, rho = v.a, v.rho
    for k in range(n):
        acc += np.conj(p2) * p1
        if k + 1 < n:
            zp1, zp2 = z1 * p1, z2 * p2
            ca = np.conj(a[k])
            p1, s1 = (zp1 - ca * s1) / rho[k], (s1 - a[k] * zp1) / rho[k]
            p2, s2 = (zp2 - ca * s2) / rho[k], (s2 - a[k] * zp2) / rho[k]
    return acc


def cd_kernel(ctx, z1, z2):
    """``k_n(z1, z2)``, broadcasting over array arguments.

    The ``cd`` strategy uses the quotient form, except where
    ``|1 - conj(z2) z1| < 1e-6``, which falls back to the sum.
    """
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    _check_domain(ctx, z1, z2)
    z1b, z2b = np.broadcast_arrays(z1, z2)
    if ctx.strategy == "sum":
        out = _sum_form(ctx.v, z1b, z2b, ctx.n)
    else:
        out = np.empty(z1b.shape, dtype=complex)
        gap = 1.0 - np.conj(z2b) * z1b
        near = np.abs(gap) < CD_SWITCH
        far = ~near
        if far.any():
            p1, s1 = szego_values(ctx.v, z1b[far], ctx.n)
            p2, s2 = szego_values(ctx.v, z2b[far], ctx.n)
            out[far] = (np.conj(s2) * s1 - np.conj(p2) * p1) / gap[far]
        if near.any():
            out[near] = _sum_form(ctx.v, z1b[near], z2b[near], ctx.n)
    return out[()] if out.ndim == 0 else out


def kernel_matrix(ctx, z1, z2):
    """``K[i, j] = k_n(z1[i], z2[j])`` through one table product."""
    z1 = np.asarray(z1, dtype=complex).ravel()
    z2 = np.asarray(z2, dtype=complex).ravel()
    _check_domain(ctx, z1, z2)
    t1 = szego_table(ctx.v, z1, ctx.n)
    t2 = szego_table(ctx.v, z2, ctx.n)
    return t1 @ t2.conj().T


def cexpm1(w):
    """``exp(w) - 1`` for complex ``w`` without cancellation near 0."""
    w = np.asarray(w, dtype=complex)
    x, y = w.real, w.imag
    re = np.expm1(x) * np.cos(y) - 2.0 * np.sin(0.5 * y) ** 2
    return re + 1j * np.exp(x) * np.sin(y)


def universal_ratio(z1, z2, n):
    """``(1 - conj(z2)^n z1^n) / (n (1 - conj(z2) z1))``.

    Near ``conj(z2) z1 = 1`` the geometric mean ``sum_{k<n} q^k / n`` is
    summed directly.  For ``1e-8 <= |1 - q| < 1/2`` the quotient is formed as
    ``expm1(n L) / (n expm1(L))`` with ``L = log q``, which avoids the
    cancellation in ``1 - q``.
    """
    if n < 1:
        raise InvalidParameterError("n must be positive")
    q = np.conj(np.asarray(z2, dtype=complex)) * np.asarray(z1, dtype=complex)
    gap = 1.0 - q
    dist = np.abs(gap)
    near = dist < UNIVERSAL_SWITCH
    mid = ~near & (dist < 0.5)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.asarray((1.0 - q ** n) / (n * np.where(near, 1.0, gap)))
        if np.any(mid):
            log_q = np.log(np.where(mid, q, 1.0))
            stable = cexpm1(n * log_q) / (n * cexpm1(log_q))
            out = np.where(mid, stable, out)
    if np.any(near):
        out = np.array(out, dtype=complex)
        qn = q[near] if q.ndim else q
        series = np.polynomial.polynomial.polyval(qn, np.ones(n)) / n
        if q.ndim:
            out[near] = series
        else:
            out = series
    return out[()] if np.ndim(out) == 0 else out


def sine_type_limit(u, v):
    """``(exp(u + conj(v)) - 1) / (u + conj(v))``, equal to 1 at ``u + conj(v) = 0``."""
    w = np.asarray(u, dtype=complex) + np.conj(np.asarray(v, dtype=complex))
    small = np.abs(w) < 1e-6
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(small, 1.0 + w / 2 + w * w / 6, np.expm1(w) / np.where(small, 1.0, w))
    return out[()] if out.ndim == 0 else out


def deviation(ctx, zeta, z1, z2):
    """Compare ``k_n(z1, z2) / k_n(zeta, zeta)`` with the Lebesgue ratio."""
    zeta = complex(zeta)
    if abs(abs(zeta) - 1.0) > 1e-12:
        raise InvalidParameterError(f"zeta must lie on the unit circle, got {zeta!r}")
    denom = ctx.diagonal(zeta)
    ratio = complex(cd_kernel(ctx, z1, z2)) / denom
    return DeviationSample(zeta, complex(z1), complex(z2), ctx.n, ratio,
                           complex(universal_ratio(z1, z2, ctx.n)))


def deviation_matrix(ctx, zeta, z1, z2):
    """Ratios and universal values for all pairs ``(z1[i], z2[j])``.

    Returns ``(ratio, universal)`` arrays of shape ``(len(z1), len(z2))``.
    """
    zeta = complex(zeta)
    if abs(abs(zeta) - 1.0) > 1e-12:
        raise InvalidParameterError(f"zeta must lie on the unit circle, got {zeta!r}")
    z1 = np.asarray(z1, dtype=complex).ravel()
    z2 = np.asarray(z2, dtype=complex).ravel()
    ratio = kernel_matrix(ctx, z1, z2) / ctx.diagonal(zeta)
    universal = universal_ratio(z1[:, None], z2[None, :], ctx.n)
    return ratio, universal
