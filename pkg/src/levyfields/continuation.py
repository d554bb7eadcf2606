"""Laplace and spectral identities linking Euclidean kernels to Wightman densities.

Momenta are arrays whose last axis holds ``(k0, k1, .., k_{d-1})``.  The
Minkowski square is ``k**2 = k0**2 - |k_spatial|**2``; the closed backward
mass cone is ``{k0 <= 0, k**2 >= m0**2}``.  Densities are evaluated off the
mass shell only, and any argument within ``SHELL_TOL`` of it raises
:class:`MassShellError`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DomainError, MassShellError
from .kernel import KernelSpec, kernel_position, mass_integral

SHELL_TOL = 1e-9
LAPLACE_TAIL_TOL = 1e-8


def _check_alpha(alpha, hi=1.0, closed=False):
    ok = 0 < alpha <= hi if closed else 0 < alpha < hi
    if not ok:
        raise DomainError(f"alpha={alpha} outside the allowed range")


def minkowski_square(k) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    return k[..., 0] ** 2 - np.sum(k[..., 1:] ** 2, axis=-1)


def in_backward_cone(k, m0: float) -> np.ndarray:
    """Closed cone membership ``k0 <= 0`` and ``k**2 >= m0**2``."""
    k = np.asarray(k, dtype=float)
    return (k[..., 0] <= 0) & (minkowski_square(k) >= m0**2)


def _off_shell(k_sq, m0):
    t = np.asarray(k_sq, dtype=float) - m0**2
    if np.any(np.abs(t) < SHELL_TOL):
        raise MassShellError(f"momentum within {SHELL_TOL} of the mass shell m0={m0}")
    return t


def _q(scalar_like):
    return float(scalar_like) if np.ndim(scalar_like) == 0 else scalar_like


# Laplace identity ---------------------------------------------------------

def _fourier_lhs(alpha, m0, x, n_half=200, n_avg=40):
    # 2 * int_0^inf cos(k x) (k^2 + m0^2)^(-alpha) dk, split at the zeros of
    # cos(kx) into alternating half-period integrals.  Iterated averaging of
    # the partial sums (Euler transform) removes the slowly decaying tail.
    def f(k):
        return np.cos(k * x) * (k * k + m0 * m0) ** (-alpha)

    z = (np.arange(n_half + 1) + 0.5) * np.pi / x
    pieces = [integrate.quad(f, 0.0, z[0], epsabs=0.0, epsrel=1e-13, limit=200)[0]]
    pieces += [integrate.quad(f, z[j], z[j + 1], epsabs=0.0, epsrel=1e-13)[0]
               for j in range(n_half)]
    partial = np.cumsum(pieces)[-(n_avg + 1):]
    prev = partial[-1]
    tail = np.inf
    for _ in range(n_avg):
        partial = 0.5 * (partial[1:] + partial[:-1])
        tail, prev = abs(partial[-1] - prev), partial[-1]
    return 2.0 * partial[-1], 2.0 * tail


def laplace_rhs(alpha: float, m0: float, x: float) -> float:
    """``2 sin(pi alpha) int_{m0}^inf exp(-r x) (r**2 - m0**2)**(-alpha) dr``."""
    # In the variable r**2 the measure dr becomes d(r**2) / (2 r).
    val = mass_integral(lambda r_sq: np.exp(-x * np.sqrt(r_sq)) / (2.0 * np.sqrt(r_sq)),
                        alpha, m0, epsrel=1e-12, what="laplace rhs")
    return 2.0 * np.sin(np.pi * alpha) * val


def laplace_identity_check(alpha: float, m0: float, x: float) -> tuple[float, float]:
    """Both sides of the Fourier / Laplace identity for ``(k**2 + m0**2)**(-alpha)``.

    ``lhs`` is the oscillatory Fourier integral over the real line, ``rhs``
    the Laplace transform of the spectral weight along ``r > m0``.
    """
    _check_alpha(alpha)
    if not m0 > 0 or not x > 0:
        raise DomainError("need m0 > 0 and x > 0")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        lhs, tail = _fourier_lhs(alpha, m0, x)
    if tail > max(LAPLACE_TAIL_TOL * abs(lhs), 1e-14):
        raise ConvergenceError(f"oscillatory tail estimate {tail:.3g} too large")
    return float(lhs), float(laplace_rhs(alpha, m0, x))


# Spectral functions ---------------------------------------------------------

def mu_densities(alpha: float, m0: float, k):
    """``(mu_plus, mu_minus, mu0)`` at momentum ``k`` (dimension = last axis)."""
    _check_alpha(alpha, 0.5, closed=True)
    k = np.asarray(k, dtype=float)
    d = k.shape[-1]
    t = _off_shell(minkowski_square(k), m0)
    norm = (2 * np.pi) ** (-0.5 * d)
    power = np.abs(t) ** (-alpha)
    inside = t > 0
    plus = np.where(inside & (k[..., 0] > 0), norm * np.sin(np.pi * alpha) * power, 0.0)
    minus = np.where(inside & (k[..., 0] < 0), norm * np.sin(np.pi * alpha) * power, 0.0)
    mu0 = np.where(inside, np.cos(np.pi * alpha), 1.0) * norm * power
    return _q(plus), _q(minus), _q(mu0)


def hilbert_rho_transform(alpha: float, m0: float, k_sq: float):
    """Closed form of ``int (m**2 - k**2)**-1 (m**2 - m0**2)**(-alpha) dm**2`` over ``m > m0``.

    Principal value when ``k**2 > m0**2``.
    """
    _check_alpha(alpha)
    t = _off_shell(k_sq, m0)
    # cot(pi/2) is exactly 0; the float expression leaves 6e-17.
    cot = 0.0 if alpha == 0.5 else np.cos(np.pi * alpha) / np.sin(np.pi * alpha)
    out = np.where(t > 0, np.pi * cot, np.pi / np.sin(np.pi * alpha))
    return _q(out * np.abs(t) ** (-alpha))


def hilbert_rho_quadrature(alpha: float, m0: float, k_sq: float) -> float:
    """The same transform by direct quadrature.

    The variable is ``t = m**2 - m0**2``.  Below the shell the integrand is
    regular apart from ``t**(-alpha)``; above it the pole at ``t = b`` is
    handled by a Cauchy-weight rule on ``[b/2, 3b/2]``.
    """
    _check_alpha(alpha)
    b = float(_off_shell(k_sq, m0))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if b < 0:
            return mass_integral(lambda m_sq: 1.0 / (m_sq - k_sq), alpha, m0, epsrel=1e-12,
                                 what="hilbert transform")
        p = 1.0 / (1.0 - alpha)
        # [0, b/2] with the endpoint substitution t = u**p.
        head = integrate.quad(lambda u: p / (u**p - b), 0.0, (0.5 * b) ** (1 / p),
                              epsabs=0.0, epsrel=1e-12, limit=200)[0]
        mid = integrate.quad(lambda t: t ** (-alpha), 0.5 * b, 1.5 * b, weight="cauchy",
                             wvar=b, epsabs=0.0, epsrel=1e-12)[0]
        tail = integrate.quad(lambda t: t ** (-alpha) / (t - b), 1.5 * b, np.inf,
                              epsabs=0.0, epsrel=1e-12, limit=200)[0]
    return head + mid + tail


def wightman2_density(alpha: float, m0: float, c2: float, k):
    """Truncated two-point Wightman density at ``(k, -k)``.

    ``c2 * 2 sin(2 pi alpha) (k**2 - m0**2)**(-2 alpha)`` on the open backward
    cone, zero elsewhere.
    """
    _check_alpha(alpha, 0.5)
    k = np.asarray(k, dtype=float)
    t = _off_shell(minkowski_square(k), m0)
    inside = (t > 0) & (k[..., 0] < 0)
    out = np.where(inside, c2 * 2.0 * np.sin(2 * np.pi * alpha) * np.abs(t) ** (-2 * alpha), 0.0)
    return _q(out)


def wightman_trunc_density(alpha: float, m0: float, n: int, c_n: float, ks):
    """Truncated n-point Wightman density multiplying ``delta(k_1 + .. + k_n)``.

    ``ks`` holds ``k_1 .. k_{n-1}`` along axis ``-2``; ``k_n`` is minus their
    sum.  The value is

        c_n (2 pi)**d 2**(n-1) sum_j prod_{l<j} mu_minus(k_l) mu0(k_j) prod_{l>j} mu_plus(k_l).
    """
    _check_alpha(alpha, 0.5, closed=True)
    if int(n) != n or n < 2:
        raise DomainError("n must be an integer >= 2")
    ks = np.asarray(ks, dtype=float)
    if ks.shape[-2] != n - 1:
        raise DomainError(f"expected {n - 1} momenta, got {ks.shape[-2]}")
    d = ks.shape[-1]
    full = np.concatenate([ks, -np.sum(ks, axis=-2, keepdims=True)], axis=-2)
    plus, minus, mu0 = mu_densities(alpha, m0, full)
    plus, minus, mu0 = (np.asarray(a) for a in (plus, minus, mu0))
    total = 0.0
    for j in range(n):
        term = mu0[..., j]
        for l in range(j):
            term = term * minus[..., l]
        for l in range(j + 1, n):
            term = term * plus[..., l]
        total = total + term
    return _q(c_n * (2 * np.pi) ** d * 2 ** (n - 1) * total)


# Support scan ---------------------------------------------------------------

@dataclass
class SupportReport:
    check: str
    n_points: int
    n_in_support: int
    n_violations: int
    max_abs_violation: float
    grid_spec: dict
    tolerances: dict

    @property
    def passed(self) -> bool:
        return self.n_violations == 0

    def to_dict(self) -> dict:
        return {"check": self.check, "max_abs_violation": self.max_abs_violation,
                "grid_spec": self.grid_spec, "tolerances": self.tolerances,
                "n_points": self.n_points, "n_in_support": self.n_in_support,
                "n_violations": self.n_violations}


def spectral_grid(n: int, d: int, m0: float, n_points: int, box: float, seed: int = 0) -> np.ndarray:
    """Random momentum configurations ``(n_points, n-1, d)`` kept away from every shell.

    Points with any ``k_l`` (including ``k_n``) or any partial sum within a
    band of ``1e-6`` of the mass shell are redrawn.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    out = np.empty((0, n - 1, d))
    while len(out) < n_points:
        cand = rng.uniform(-box, box, size=(2 * n_points, n - 1, d))
        full = np.concatenate([cand, -cand.sum(axis=1, keepdims=True)], axis=1)
        sums = np.cumsum(cand, axis=1)
        near = np.abs(minkowski_square(np.concatenate([full, sums], axis=1)) - m0**2) < 1e-6
        out = np.concatenate([out, cand[~near.any(axis=1)]])
    return out[:n_points]


def spectral_support_check(density: Callable, n: int, m0: float, grid: np.ndarray,
                           name: str = "density", grid_spec: dict | None = None) -> SupportReport:
    """Scan for nonzero density where some partial sum ``k_1 + .. + k_r`` leaves the cone.

    ``density`` maps an array ``(points, n-1, d)`` to values per point.
    """
    grid = np.asarray(grid, dtype=float)
    vals = np.asarray(density(grid), dtype=float)
    sums = np.cumsum(grid, axis=1)
    ok = np.all(in_backward_cone(sums, m0), axis=1)
    bad = np.abs(vals[~ok])
    return SupportReport(
        check=f"spectral support of {name}", n_points=int(len(grid)),
        n_in_support=int(np.sum(ok & (vals != 0))), n_violations=int(np.sum(bad != 0)),
        max_abs_violation=float(bad.max()) if bad.size else 0.0,
        grid_spec=dict(grid_spec or {"n": n, "points": int(len(grid))}),
        tolerances={"violation": 0.0, "shell_band": SHELL_TOL})


# Euclidean restriction ----------------------------------------------------

def laplace_of_wightman2(alpha: float, m0: float, c2: float, x: float) -> float:
    """``(2 pi)**-1 int_{k0 < -m0} exp(-|x| |k0|) w2(k0) dk0`` in one dimension."""
    if c2 == 0:
        return 0.0
    def g(r_sq):
        r = np.sqrt(r_sq)
        return np.exp(-abs(x) * r) * _w2_regular(alpha, m0, c2, r_sq) / (2.0 * r)

    return mass_integral(g, 2 * alpha, m0, epsrel=1e-12, what="wightman laplace") / (2 * np.pi)


def _w2_regular(alpha, m0, c2, r_sq):
    # Density at k0 = -r times (r**2 - m0**2)**(2 alpha), the factor that
    # mass_integral supplies itself.  Inside the shell band the density is
    # read at the nearest admissible point; the product is constant there.
    t = max(r_sq - m0**2, 2 * SHELL_TOL)
    return wightman2_density(alpha, m0, c2, [-np.sqrt(m0**2 + t)]) * t ** (2 * alpha)


def euclidean_restriction_check(alpha: float, m0: float, c2: float, xs) -> list[tuple[float, float]]:
    """``(s_direct, s_laplace)`` per point in one dimension.

    ``s_direct = c2 * G_{2 alpha}(x)`` via the mass superposition;
    ``s_laplace`` integrates the two-point Wightman density.
    """
    _check_alpha(alpha, 0.5)
    out = []
    for x in xs:
        if x == 0:
            raise DomainError("x must be nonzero")
        direct = 0.0 if c2 == 0 else c2 * kernel_position(KernelSpec(2 * alpha, m0, 1), [x])
        out.append((float(direct), float(laplace_of_wightman2(alpha, m0, c2, x))))
    return out


def weak_limit_ratio(alpha: float, m0: float, width: float) -> float:
    """Two-point density against a shell-centred bump, over its ``alpha = 1/2`` limit.

    The bump is ``exp(-(k0 + m0)**2 / (2 width**2))`` in one dimension.  As
    ``alpha`` rises to 1/2 the density tends weakly to ``2 pi`` times the
    mass-shell measure, whose pairing with the bump is ``2 pi / (2 m0)``.
    """
    _check_alpha(alpha, 0.5)

    def g(r_sq):
        r = np.sqrt(r_sq)
        w = _w2_regular(alpha, m0, 1.0, r_sq)
        return np.exp(-((r - m0) ** 2) / (2 * width**2)) * w / (2.0 * r)

    val = mass_integral(g, 2 * alpha, m0, epsrel=1e-12, what="weak limit")
    return float(val / (2 * np.pi / (2 * m0)))
