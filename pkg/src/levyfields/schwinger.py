"""Schwinger functions of the convoluted noise field X = G * F.

The truncated functions are local,

    S^T_n(phi_1, .., phi_n) = c_n * integral prod_j (G * phi_j)(x) dx,

and the full moments follow from the partition transform.  Monte Carlo
estimates sample F, convolve every draw and average products of pairings.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, OffLattice, SupportError
from .kernel import KernelSpec, convolve_values
from .lattice import LatticeField, LatticeSpec, require_same_lattice
from .levy import LevyTriple, RngStream, cumulant, sample_noise_batch
from .partitions import moments_from_truncated, truncated_from_moments

MC_BATCHES = 100
MC_CHUNK = 2048


@dataclass(frozen=True, eq=False)
class TestFunction:
    """A lattice test function, optionally declared to live at positive times."""

    __test__ = False  # keep pytest from collecting this class

    field: LatticeField
    half_space_positive: bool = False

    def __post_init__(self):
        if self.half_space_positive:
            x0 = self.field.spec.coords()[0]
            if np.any(self.field.values[x0 <= 0] != 0):
                raise SupportError(f"{self.field.name}: values at x0 <= 0 with a positive-time flag")

    @property
    def spec(self) -> LatticeSpec:
        return self.field.spec

    @property
    def values(self) -> np.ndarray:
        return self.field.values

    @property
    def name(self) -> str:
        return self.field.name

    def scaled(self, c: float) -> "TestFunction":
        return TestFunction(self.field * c, self.half_space_positive)


@dataclass(frozen=True)
class SchwingerEstimate:
    value: float
    std_error: float
    n_samples: int


class ConvolutionCache:
    """Memo of ``G * phi`` keyed by test-function identity and kernel."""

    def __init__(self):
        self._store = {}

    def get(self, kspec: KernelSpec, phi: TestFunction) -> np.ndarray:
        key = (id(phi), kspec)
        hit = self._store.get(key)
        if hit is None:
            # Keep a reference to phi so its id cannot be recycled.
            hit = (phi, convolve_values(kspec, phi.spec, phi.values))
            self._store[key] = hit
        return hit[1]


def _lattice_of(phis: Sequence[TestFunction]) -> LatticeSpec:
    if not phis:
        raise DomainError("need at least one test function")
    return require_same_lattice(*(p.field for p in phis))


class _BlockEvaluator:
    """Truncated functions on sub-blocks of a fixed argument list."""

    def __init__(self, kspec, triple, phis, cache=None):
        self.lattice = _lattice_of(phis)
        if kspec.d != self.lattice.d:
            raise DomainError(f"kernel d={kspec.d} differs from lattice d={self.lattice.d}")
        cache = cache or ConvolutionCache()
        self.conv = [cache.get(kspec, p) for p in phis]
        self.weights = self.lattice.weights()
        self.triple = triple
        self._c = {}

    def c(self, n):
        if n not in self._c:
            self._c[n] = cumulant(self.triple, n)
        return self._c[n]

    def __call__(self, block: tuple[int, ...]) -> float:
        cn = self.c(len(block))
        if cn == 0.0:
            return 0.0
        prod = self.weights.copy()
        for j in block:
            prod *= self.conv[j]
        return cn * float(np.sum(prod))


def truncated_schwinger(kspec: KernelSpec, triple: LevyTriple, phis: Sequence[TestFunction],
                        cache: ConvolutionCache | None = None) -> float:
    """``c_n * delta**d * sum_x prod_j (G * phi_j)(x)``."""
    ev = _BlockEvaluator(kspec, triple, phis, cache)
    return ev(tuple(range(len(phis))))


def schwinger(kspec: KernelSpec, triple: LevyTriple, phis: Sequence[TestFunction],
              cache: ConvolutionCache | None = None) -> float:
    """Moment function as the partition sum of truncated block values."""
    if len(phis) == 0:
        return 1.0
    ev = _BlockEvaluator(kspec, triple, phis, cache)
    return moments_from_truncated(ev, len(phis))


def truncate(kspec: KernelSpec, triple: LevyTriple, phis: Sequence[TestFunction]) -> float:
    """Truncated function recovered from full moments of sub-blocks."""
    cache = ConvolutionCache()

    def moment(block):
        return schwinger(kspec, triple, [phis[i] for i in block], cache)

    return truncated_from_moments(moment, len(phis))


def _mc_chunk(kspec, triple, lattice, tests, weights, rng, n):
    noise = sample_noise_batch(triple, lattice, rng, n)
    field = convolve_values(kspec, lattice, noise)
    axes = tuple(range(1, lattice.d + 1))
    prod = np.ones(n)
    for phi in tests:
        prod *= np.sum(field * (weights * phi), axis=axes)
    return prod


def mc_samples(kspec: KernelSpec, triple: LevyTriple, phis: Sequence[TestFunction],
               n_samples: int, rng: RngStream, threads: int = 1) -> np.ndarray:
    """Per-sample products ``prod_j <phi_j, X>`` in a reproducible order.

    Work is split into fixed-size chunks, chunk ``i`` drawing from
    ``rng.spawn(i)``; the thread count does not change the result.
    """
    if int(n_samples) != n_samples or n_samples < 2:
        raise DomainError("n_samples must be an integer >= 2")
    lattice = _lattice_of(phis)
    weights = lattice.weights()
    tests = [p.values for p in phis]
    sizes = [MC_CHUNK] * (n_samples // MC_CHUNK)
    if n_samples % MC_CHUNK:
        sizes.append(n_samples % MC_CHUNK)

    def job(i):
        return _mc_chunk(kspec, triple, lattice, tests, weights, rng.spawn(i), sizes[i])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(job, range(len(sizes))))
    else:
        parts = [job(i) for i in range(len(sizes))]
    return np.concatenate(parts)


def batch_means_error(samples: np.ndarray, n_batches: int = MC_BATCHES) -> float:
    """Standard error of the mean from contiguous batch means."""
    n = len(samples)
    b = min(n_batches, n)
    if b < 2:
        return float("nan")
    usable = (n // b) * b
    means = samples[:usable].reshape(b, -1).mean(axis=1)
    return float(np.std(means, ddof=1) / np.sqrt(b))


def mc_schwinger(kspec: KernelSpec, triple: LevyTriple, phis: Sequence[TestFunction],
                 n_samples: int, rng: RngStream, threads: int = 1) -> SchwingerEstimate:
    """Monte Carlo moment estimate with a batch-means standard error."""
    s = mc_samples(kspec, triple, phis, n_samples, rng, threads)
    return SchwingerEstimate(float(np.mean(s)), batch_means_error(s), int(n_samples))


def translate(phi: TestFunction, shift: Sequence[int]) -> TestFunction:
    """Shift by whole sites; the support must stay off the ghost layer."""
    spec = phi.spec
    v = phi.values
    nz = np.nonzero(v)
    for ax, s in enumerate(shift):
        if nz[ax].size and (nz[ax].min() + s < 1 or nz[ax].max() + s >= spec.n_per_axis):
            raise OffLattice(f"shift {tuple(shift)} moves {phi.name} off the lattice box")
    out = np.roll(v, tuple(shift), axis=tuple(range(spec.d)))
    flag = phi.half_space_positive and shift[0] >= 0
    return TestFunction(LatticeField(spec, out, phi.name), flag)


def cluster_scan(kspec: KernelSpec, triple: LevyTriple, phis_left: Sequence[TestFunction],
                 phis_right: Sequence[TestFunction], direction, lambdas) -> list[tuple[float, float]]:
    """Truncated function with the right group translated by ``lambda * direction``."""
    spec = _lattice_of(list(phis_left) + list(phis_right))
    a = np.atleast_1d(np.asarray(direction, dtype=float))
    if a.shape != (spec.d,) or not np.isclose(np.linalg.norm(a), 1.0):
        raise DomainError("direction must be a unit vector of lattice dimension")
    cache = ConvolutionCache()
    out = []
    for lam in lambdas:
        shift = spec.sites_for_shift(lam * a)
        right = [translate(p, shift) for p in phis_right]
        out.append((float(lam), truncated_schwinger(kspec, triple, list(phis_left) + right, cache)))
    return out


def decay_rate(scan: Sequence[tuple[float, float]]) -> float:
    """Minus the least-squares slope of ``log|value|`` against lambda."""
    lam = np.array([s[0] for s in scan])
    val = np.abs(np.array([s[1] for s in scan]))
    if np.any(val == 0):
        raise DomainError("cannot fit a decay rate through zero values")
    return float(-np.polyfit(lam, np.log(val), 1)[0])
