"""Acceptance gate: twelve criteria, each reported as one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (the lines appear in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import sys
import time

import mpmath as mp
import numpy as np
import pytest

from levyfields.continuation import (euclidean_restriction_check, hilbert_rho_quadrature,
                                     hilbert_rho_transform, laplace_identity_check, spectral_grid,
                                     spectral_support_check, wightman2_density,
                                     wightman_trunc_density)
from levyfields.kernel import KernelSpec, kernel_position
from levyfields.lattice import LatticeSpec, gaussian_bump
from levyfields.levy import (LevyTriple, RngStream, center, cumulant, gaussian_limit_triple,
                             sample_site)
from levyfields.reflection import (find_rp_violation, reflect_time, rp_gram, witness_gram)
from levyfields.schwinger import (TestFunction, cluster_scan, decay_rate, mc_schwinger, schwinger)

RESULTS: list[str] = []
K_HALF = KernelSpec(0.5, 1.0, 1)
GAUSS = LevyTriple(0.0, 1.0)
POISSON = center(LevyTriple.from_atoms(0.0, 0.0, [(1.0, 1.0)]))


def _record(num: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  [{num:2d}] {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _bump(lat, centre, width, positive=False):
    return TestFunction(gaussian_bump(lat, centre, width, positive_time=positive), positive)


def test_01_moments_monte_carlo():
    start = time.perf_counter()
    lat = LatticeSpec(1, 256, 0.05)
    triple = center(LevyTriple.from_atoms(0.0, 1.0, [(1.0, 1.0)]))
    phis = [_bump(lat, [c], 0.3) for c in (-0.5, 0.0, 0.4, 0.8)]
    z = []
    for n in (1, 2, 3, 4):
        est = mc_schwinger(K_HALF, triple, phis[:n], 200_000, RngStream(20240601, n), threads=4)
        z.append(abs(est.value - schwinger(K_HALF, triple, phis[:n])) / est.std_error)
    wall = time.perf_counter() - start
    ok = max(z) <= 5 and wall <= 60
    _record(1, "MC moments vs partition sum", ok,
            f"|z| = {', '.join(f'{v:.2f}' for v in z)} (<= 5), {wall:.1f} s (<= 60)")


def test_02_laplace_identity():
    start = time.perf_counter()
    worst = 0.0
    ok = True
    for alpha in (0.1, 0.25, 0.5, 0.75, 0.9):
        tol = 1e-4 if alpha >= 0.9 else 1e-5
        for x in (0.5, 1.0, 2.0):
            lhs, rhs = laplace_identity_check(alpha, 1.0, x)
            r = abs(lhs - rhs) / abs(rhs)
            worst = max(worst, r)
            ok &= r <= tol
    wall = time.perf_counter() - start
    ok &= wall <= 10
    _record(2, "Laplace identity grid", ok, f"max rel {worst:.2e}, {wall:.2f} s (<= 10)")


def _fourier_oracle(alpha, x):
    # (1/pi) int_0^inf cos(k x) (k^2 + 1)^(-alpha) dk by mpmath oscillatory quadrature.
    mp.mp.dps = 15
    a, xx = mp.mpf(alpha), mp.mpf(x)
    return float(mp.quadosc(lambda k: mp.cos(k * xx) * (k * k + 1) ** (-a), [0, mp.inf], omega=xx) / mp.pi)


def test_03_kallen_lehmann():
    worst = 0.0
    for alpha in (0.25, 0.4):
        for x in (0.5, 1.0, 2.0):
            got = kernel_position(KernelSpec(alpha, 1.0, 1), [x])
            worst = max(worst, abs(got / _fourier_oracle(alpha, x) - 1))
    _record(3, "mass superposition vs Fourier quadrature", worst <= 1e-4, f"max rel {worst:.2e} (<= 1e-4)")


def test_04_wick_closure():
    lat = LatticeSpec(1, 256, 0.05)
    phi = _bump(lat, [0.0], 0.4)
    s2 = schwinger(K_HALF, GAUSS, [phi, phi])
    s4 = schwinger(K_HALF, GAUSS, [phi] * 4)
    rel = abs(s4 / (3 * s2**2) - 1)
    est = mc_schwinger(K_HALF, GAUSS, [phi] * 4, 200_000, RngStream(4), threads=4)
    z = abs(est.value - s4) / est.std_error
    _record(4, "Wick closure", rel <= 1e-10 and z <= 5, f"analytic rel {rel:.1e} (<= 1e-10), MC |z| = {z:.2f} (<= 5)")


def _rp_family(d):
    if d == 1:
        lat = LatticeSpec(1, 256, 0.05)
        specs = [([0.5], 0.3), ([1.0], 0.3), ([1.5], 0.4), ([0.8], 0.2)]
    else:
        lat = LatticeSpec(2, 64, 0.1)
        specs = [([0.5, 0.0], 0.3), ([1.0, 0.0], 0.3), ([1.5, 0.0], 0.4), ([0.8, 0.3], 0.2)]
    f = [_bump(lat, c, w, positive=True) for c, w in specs]
    return KernelSpec(0.5, 1.0, d), [(f[0],), (f[1], f[2]), (f[0], f[2], f[3]), (f[0], f[1], f[2], f[3])]


def test_05_gaussian_reflection_positivity():
    parts, ok = [], True
    for d in (1, 2):
        kspec, fam = _rp_family(d)
        rep = rp_gram(kspec, GAUSS, fam, "full")
        bound = -1e-8 * np.linalg.norm(rep.matrix, 2)
        ok &= rep.min_eigenvalue >= bound
        parts.append(f"d={d} min eig {rep.min_eigenvalue:.2e}")
    _record(5, "Gaussian Gram matrices PSD", ok, ", ".join(parts) + " (>= -1e-8 ||M||)")


def test_06_poisson_violation():
    lat = LatticeSpec(1, 256, 0.05)
    w = find_rp_violation(K_HALF, POISSON, lat)
    poly = lambda lam: np.polyval(w.polynomial[::-1], lam)
    lams = w.lambda0 * np.geomspace(1e-3, 0.5, 30)
    gram_neg = all(np.linalg.eigvalsh(witness_gram(K_HALF, POISSON, w, lam))[0] < 0 for lam in lams)
    form_neg = all(poly(lam) < 0 for lam in lams)
    crossing = poly(w.lambda0 * (1 - 2e-6)) < 0 < poly(w.lambda0 * (1 + 2e-6))
    ok = w.integral_value < 0 and w.n_power <= 6 and gram_neg and form_neg and crossing
    if w.n_power == 1:
        fam = [(w.phi1, w.phi1, w.phi2)]
        cond = [rp_gram(K_HALF, POISSON.scaled(lam), fam, "conditional").min_eigenvalue for lam in lams]
        ok &= max(cond) < 0
    _record(6, "Poisson reflection-positivity violation", ok,
            f"n={w.n_power}, integral {w.integral_value:.3e}, lambda0 {w.lambda0:.4e}, "
            f"negative at {len(lams)} couplings <= lambda0/2")


def test_07_cluster_decay():
    lat = LatticeSpec(1, 1024, 0.05)
    phi = _bump(lat, [-6.0], 0.3)
    scan = cluster_scan(K_HALF, GAUSS, [phi], [phi], [1.0], np.arange(5.0, 10.01, 0.5))
    rate = decay_rate(scan)
    _record(7, "cluster decay rate", 0.9 <= rate <= 1.2, f"rate {rate:.4f} m0 (in [0.9, 1.2])")


def test_08_spectral_support():
    counts = []
    g2 = spectral_grid(2, 2, 1.0, 10_000, 4.0, seed=8)
    r2 = spectral_support_check(lambda g: wightman2_density(0.25, 1.0, 1.0, g[:, 0, :]), 2, 1.0, g2)
    g3 = spectral_grid(3, 2, 1.0, 10_000, 4.0, seed=9)
    r3 = spectral_support_check(lambda g: wightman_trunc_density(0.25, 1.0, 3, 1.0, g), 3, 1.0, g3)
    ok = r2.passed and r3.passed and r2.n_in_support > 0 and r3.n_in_support > 0
    for r in (r2, r3):
        counts.append(f"{r.n_violations} violations / {r.n_in_support} nonzero")
    _record(8, "spectral support on 1e4-point grids", ok, "; ".join(counts))


def test_09_gaussian_limit():
    ns = [1, 2, 4, 8]
    exact = all(cumulant(gaussian_limit_triple(n, 1.0), 4) == 1.0 / n**2 for n in ns)
    v = 0.1
    kurt = []
    for n in ns:
        x = sample_site(gaussian_limit_triple(n, 1.0), v, RngStream(9, n), size=10**6)
        c = x - x.mean()
        kurt.append(np.mean(c**4) / np.mean(c**2) ** 2 - 3)
    slope = np.polyfit(np.log(ns), np.log(kurt), 1)[0]
    ok = exact and abs(slope + 2) <= 0.3
    _record(9, "Gaussian limit", ok, f"c4 = 1/n^2 exact: {exact}, kurtosis slope {slope:.3f} (-2 +- 0.3)")


def test_10_hilbert_transform():
    worst_ord, worst_pv = 0.0, 0.0
    for alpha in (0.1, 0.25, 0.4, 0.6, 0.9):
        for ksq in (-3.0, 0.0, 0.5, 2.0, 5.0):
            closed = hilbert_rho_transform(alpha, 1.0, ksq)
            quad = hilbert_rho_quadrature(alpha, 1.0, ksq)
            r = abs(closed - quad) / abs(closed)
            if ksq > 1:
                worst_pv = max(worst_pv, r)
            else:
                worst_ord = max(worst_ord, r)
    ok = worst_ord <= 1e-6 and worst_pv <= 1e-4
    _record(10, "closed-form mass transforms", ok,
            f"ordinary max rel {worst_ord:.1e} (<= 1e-6), principal value {worst_pv:.1e} (<= 1e-4)")


def test_11_two_point_identity():
    grid = spectral_grid(2, 2, 1.0, 10_000, 4.0, seed=11)
    worst = 0.0
    for alpha in (0.1, 0.25, 0.4):
        a = wightman_trunc_density(alpha, 1.0, 2, 1.0, grid)
        b = wightman2_density(alpha, 1.0, 1.0, grid[:, 0, :])
        same_zero = np.array_equal(a == 0, b == 0)
        nz = b != 0
        worst = max(worst, float(np.max(np.abs(a[nz] / b[nz] - 1))) if same_zero else np.inf)
    _record(11, "n=2 density equals two-point formula", worst <= 1e-12, f"max rel {worst:.1e} (<= 1e-12)")


def test_12_euclidean_restriction():
    pairs = euclidean_restriction_check(0.25, 1.0, 1.0, [1.0, 2.0])
    rels = [abs(l / d - 1) for d, l in pairs]
    _record(12, "Euclidean restriction", max(rels) <= 1e-3,
            f"rel {', '.join(f'{r:.1e}' for r in rels)} (<= 1e-3)")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
