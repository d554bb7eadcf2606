"""The kernel G_alpha of (-Laplace + m0**2)**(-alpha) and its application.

Two representations are provided.

* ``convolve`` applies the operator symbol ``(|k|**2 + m0**2)**(-alpha)``
  with an FFT on a grid zero-padded to twice the linear size, so the result
  is the linear (not periodic) Riemann-sum convolution on the lattice box.
* ``kernel_position`` evaluates G_alpha(x) pointwise as a superposition of
  free covariances over the mass spectrum ``m**2 > m0**2``.

Normalization: the free covariance is the kernel of ``(|k|**2 + m**2)**-1``,

    C_m(x) = (2 pi)**(-d/2) (m/r)**nu K_nu(m r),    nu = (d - 2)/2,

which is ``exp(-m r)/(2m)`` in one dimension.  With the spectral density
``rho_alpha(m**2) = 2 sin(pi alpha) (m**2 - m0**2)**(-alpha)`` the kernel is
``G_alpha = (2 pi)**-1 * integral C_m rho_alpha(dm**2)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft
from scipy import integrate, special

from .errors import ConvergenceError, DomainError
from .lattice import LatticeField, LatticeSpec

QUAD_ABS_FLOOR = 1e-12
QUAD_REL_TARGET = 1e-6


@dataclass(frozen=True)
class KernelSpec:
    alpha: float
    m0: float
    d: int = 1

    def __post_init__(self):
        if not (0 < self.alpha <= 1):
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not self.m0 > 0:
            raise DomainError(f"m0 must be positive, got {self.m0}")
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"d must be a positive integer, got {self.d}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "m0", float(self.m0))
        object.__setattr__(self, "d", int(self.d))


def multiplier_from_ksq(spec: KernelSpec, k_sq):
    return (np.asarray(k_sq, dtype=float) + spec.m0**2) ** (-spec.alpha)


def fourier_multiplier(spec: KernelSpec, k):
    """Operator symbol ``(|k|**2 + m0**2)**(-alpha)``.

    ``k`` is one momentum vector or an array whose last axis holds vector
    components.  A scalar is read as a one-component vector.
    """
    k = np.asarray(k, dtype=float)
    k_sq = k**2 if k.ndim == 0 else np.sum(k**2, axis=-1)
    out = multiplier_from_ksq(spec, k_sq)
    return float(out) if np.ndim(out) == 0 else out


@lru_cache(maxsize=32)
def _padded_multiplier(spec: KernelSpec, lattice: LatticeSpec) -> np.ndarray:
    if spec.d != lattice.d:
        raise DomainError(f"kernel has d={spec.d} but lattice has d={lattice.d}")
    m = 2 * lattice.n_per_axis
    k_full = 2 * np.pi * scipy.fft.fftfreq(m, d=lattice.delta)
    k_half = 2 * np.pi * scipy.fft.rfftfreq(m, d=lattice.delta)
    axes = [k_full] * (lattice.d - 1) + [k_half]
    grids = np.meshgrid(*axes, indexing="ij")
    mult = multiplier_from_ksq(spec, sum(g**2 for g in grids))
    mult.setflags(write=False)
    return mult


def convolve_values(spec: KernelSpec, lattice: LatticeSpec, values, workers=None):
    """Convolve raw arrays; the trailing ``d`` axes are lattice axes.

    Leading axes are treated as a batch.  Ghost-layer inputs are ignored.
    """
    values = np.asarray(values, dtype=float)
    d, n = lattice.d, lattice.n_per_axis
    if values.shape[values.ndim - d:] != lattice.shape:
        raise DomainError("array does not match the lattice shape")
    axes = tuple(range(values.ndim - d, values.ndim))
    masked = values * lattice.interior_mask()
    spectrum = scipy.fft.rfftn(masked, s=(2 * n,) * d, axes=axes, workers=workers)
    spectrum *= _padded_multiplier(spec, lattice)
    full = scipy.fft.irfftn(spectrum, s=(2 * n,) * d, axes=axes, workers=workers)
    crop = (Ellipsis,) + (slice(0, n),) * d
    return full[crop] * lattice.interior_mask()


def convolve(spec: KernelSpec, f: LatticeField) -> LatticeField:
    """``G_alpha * f`` as a Riemann-sum convolution on the lattice box."""
    return LatticeField(f.spec, convolve_values(spec, f.spec, f.values), f"G*{f.name}")


def _radius(x) -> float:
    r = float(np.linalg.norm(np.atleast_1d(np.asarray(x, dtype=float))))
    if r == 0.0:
        raise DomainError("the kernel is singular at x = 0")
    return r


def bessel_k(nu: float, z):
    """Modified Bessel function K_nu(z) for z > 0."""
    return special.kv(nu, z)


def _free_cov_r(m: float, d: int, r: float) -> float:
    mr = m * r
    if mr > 700.0:
        return 0.0
    if d == 1:
        return np.exp(-mr) / (2.0 * m)
    if d == 3:
        return np.exp(-mr) / (4.0 * np.pi * r)
    nu = 0.5 * (d - 2)
    # kve carries the exp(mr) factor, avoiding underflow at large mr.
    return (2 * np.pi) ** (-0.5 * d) * (m / r) ** nu * special.kve(nu, mr) * np.exp(-mr)


def free_covariance(m: float, d: int, x) -> float:
    """Euclidean free covariance of mass ``m`` in ``d`` dimensions at ``x``."""
    if not m > 0:
        raise DomainError("mass must be positive")
    if int(d) != d or d < 1:
        raise DomainError("d must be a positive integer")
    return float(_free_cov_r(float(m), int(d), _radius(x)))


def rho_alpha(alpha: float, m0: float, m_sq):
    """Spectral density ``2 sin(pi alpha) (m**2 - m0**2)**(-alpha)`` on ``m**2 > m0**2``."""
    m_sq = np.asarray(m_sq, dtype=float)
    t = m_sq - m0**2
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(t > 0, 2 * np.sin(np.pi * alpha) * np.abs(t) ** (-alpha), 0.0)
    return float(out) if out.ndim == 0 else out


def mass_integral(g, alpha: float, m0: float, *, epsrel=1e-10, what="mass integral"):
    """``integral g(m**2) (m**2 - m0**2)**(-alpha) dm**2`` over ``m**2 > m0**2``.

    The substitution ``u = (m**2 - m0**2)**(1 - alpha)`` removes the endpoint
    singularity; ``g`` must decay fast enough for the integral to converge.
    """
    p = 1.0 / (1.0 - alpha)

    def integrand(u):
        with np.errstate(over="ignore"):
            t = np.power(np.float64(u), p)
        if not np.isfinite(t):
            return 0.0
        return p * g(m0**2 + t)

    # Split at u = 1 so the integrator sees the smooth core separately from
    # the long tail.
    total, err = 0.0, 0.0
    with warnings.catch_warnings():
        # The error estimate is checked below; scipy's warning adds nothing.
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in ((0.0, 1.0), (1.0, np.inf)):
            v, e = integrate.quad(integrand, a, b, epsabs=QUAD_ABS_FLOOR * 1e-3,
                                  epsrel=epsrel, limit=400)
            total += v
            err += e
    if err > max(QUAD_ABS_FLOOR, QUAD_REL_TARGET * abs(total)):
        raise ConvergenceError(f"{what}: error estimate {err:.3g} for value {total:.6g}")
    return total


def kernel_position(spec: KernelSpec, x) -> float:
    """G_alpha(x) from the mass superposition of free covariances.

    At ``alpha = 1`` the spectral measure is a point mass at ``m0`` and the
    kernel is the free covariance itself.
    """
    r = _radius(x)
    if spec.alpha == 1.0:
        return float(_free_cov_r(spec.m0, spec.d, r))
    val = mass_integral(lambda m_sq: _free_cov_r(np.sqrt(m_sq), spec.d, r),
                        spec.alpha, spec.m0, what="kernel_position")
    return float(np.sin(np.pi * spec.alpha) / np.pi * val)
