"""Levy characteristics, noise cumulants and white-noise sampling.

A triple ``(a, sigma, M)`` with a finite atomic jump measure ``M`` fixes the
characteristic exponent

    psi(t) = i a t - sigma**2 t**2 / 2 + sum_i w_i (exp(i s_i t) - 1 - i s_i t / (1 + s_i**2)).

Generalized white noise with this exponent has independent values at every
point; on a lattice the integrated noise over one cell is an infinitely
divisible variable with exponent ``volume * psi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError
from .lattice import LatticeField, LatticeSpec


@dataclass(frozen=True)
class JumpMeasure:
    """Finitely many atoms ``(location, weight)`` with ``location != 0``."""

    atoms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        clean = []
        for atom in self.atoms:
            s, w = (float(v) for v in atom)
            if not (np.isfinite(s) and np.isfinite(w)):
                raise DomainError(f"jump atom {atom!r} is not finite")
            if s == 0.0:
                raise DomainError("jump atoms must have nonzero location")
            if w <= 0.0:
                raise DomainError(f"jump weight must be positive, got {w}")
            clean.append((s, w))
        object.__setattr__(self, "atoms", tuple(clean))

    @property
    def locations(self) -> np.ndarray:
        return np.array([s for s, _ in self.atoms], dtype=float)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms], dtype=float)

    @property
    def total_mass(self) -> float:
        return float(sum(w for _, w in self.atoms))

    def moment(self, n: int) -> float:
        """``sum_i w_i s_i**n``."""
        return float(sum(w * s**n for s, w in self.atoms))

    def __bool__(self):
        return bool(self.atoms)


@dataclass(frozen=True)
class LevyTriple:
    """Drift ``a``, Gaussian scale ``sigma`` and jump measure."""

    a: float = 0.0
    sigma: float = 0.0
    jumps: JumpMeasure = field(default_factory=JumpMeasure)

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.sigma)):
            raise DomainError("a and sigma must be finite")
        if self.sigma < 0:
            raise DomainError(f"sigma must be >= 0, got {self.sigma}")
        if not isinstance(self.jumps, JumpMeasure):
            object.__setattr__(self, "jumps", JumpMeasure(tuple(self.jumps)))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "sigma", float(self.sigma))

    @classmethod
    def from_atoms(cls, a=0.0, sigma=0.0, atoms=()):
        return cls(a, sigma, JumpMeasure(tuple(tuple(x) for x in atoms)))

    @property
    def is_gaussian(self) -> bool:
        return not self.jumps

    def scaled(self, lam: float) -> "LevyTriple":
        """Triple with exponent ``lam * psi``; every cumulant scales by ``lam``.

        The weights scale by ``lam`` and ``sigma`` by ``sqrt(lam)``.
        """
        if lam <= 0:
            raise DomainError("scale factor must be positive")
        atoms = tuple((s, lam * w) for s, w in self.jumps.atoms)
        return LevyTriple(lam * self.a, float(np.sqrt(lam)) * self.sigma, JumpMeasure(atoms))

    def to_dict(self) -> dict:
        return {"a": self.a, "sigma": self.sigma,
                "atoms": [[s, w] for s, w in self.jumps.atoms]}


@dataclass(frozen=True)
class CumulantSequence:
    """Noise cumulants ``c_1 .. c_N``; index with the order, starting at 1."""

    values: tuple[float, ...]

    def __getitem__(self, n: int) -> float:
        if not 1 <= n <= len(self.values):
            raise IndexError(f"cumulant order {n} outside 1..{len(self.values)}")
        return self.values[n - 1]

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream addressed by ``(seed, stream_id, path)``.

    Every call to :meth:`generator` starts the same Philox sequence, so a
    stream can be handed to several consumers without shared state.
    """

    seed: int
    stream_id: int = 0
    path: tuple[int, ...] = ()

    def __post_init__(self):
        if self.seed < 0 or self.seed >= 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=int(self.seed),
                                    spawn_key=(int(self.stream_id),) + tuple(self.path))
        return np.random.Generator(np.random.Philox(ss))

    def spawn(self, i: int) -> "RngStream":
        """Independent child stream number ``i``."""
        return replace(self, path=self.path + (int(i),))


def psi_eval(triple: LevyTriple, t):
    """Levy characteristic exponent at real ``t`` (scalar or array)."""
    t = np.asarray(t, dtype=float)
    out = 1j * triple.a * t - 0.5 * triple.sigma**2 * t**2
    for s, w in triple.jumps.atoms:
        out = out + w * (np.exp(1j * s * t) - 1.0 - 1j * s * t / (1.0 + s * s))
    return complex(out) if out.ndim == 0 else out


def cumulant(triple: LevyTriple, n: int) -> float:
    """Noise cumulant constant ``c_n``."""
    if int(n) != n or n < 1:
        raise DomainError(f"cumulant order must be a positive integer, got {n}")
    atoms = triple.jumps.atoms
    if n == 1:
        return triple.a + sum(w * s**3 / (1.0 + s * s) for s, w in atoms)
    if n == 2:
        return triple.sigma**2 + triple.jumps.moment(2)
    return triple.jumps.moment(n)


def cumulants(triple: LevyTriple, n_max: int) -> CumulantSequence:
    return CumulantSequence(tuple(cumulant(triple, n) for n in range(1, n_max + 1)))


def center(triple: LevyTriple) -> LevyTriple:
    """Replace the drift so that ``c_1 = 0``."""
    a = -sum(w * s**3 / (1.0 + s * s) for s, w in triple.jumps.atoms)
    return replace(triple, a=float(a))


def gaussian_limit_triple(n: int, sigma: float) -> LevyTriple:
    """Poisson triple with one atom ``(1/n, n**2 sigma**2)``.

    Its ``c_2`` is ``sigma**2`` for every ``n`` while ``c_4 = sigma**2 / n**2``,
    so the noise becomes Gaussian as ``n`` grows.
    """
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    return LevyTriple(0.0, 0.0, JumpMeasure(((1.0 / n, float(n * n) * sigma**2),)))


def _draw(triple: LevyTriple, volume: float, gen: np.random.Generator, size):
    # Fixed draw order (Gaussian, then one Poisson count per atom) keeps the
    # sequence reproducible for a given generator state.
    # The exponent's compensator -i s t/(1+s**2) is a deterministic drift.
    drift = triple.a - sum(w * s / (1.0 + s * s) for s, w in triple.jumps.atoms)
    out = np.full(size, drift * volume, dtype=float)
    if triple.sigma > 0:
        out += triple.sigma * np.sqrt(volume) * gen.standard_normal(size)
    # A compound Poisson sum over finitely many atoms is the sum of
    # independent Poisson(volume * w_i) multiples of each location.
    for s, w in triple.jumps.atoms:
        out += s * gen.poisson(volume * w, size)
    return out


def sample_site(triple: LevyTriple, volume: float, rng: RngStream, size=None):
    """Draw the integrated noise of one cell of the given volume.

    With ``size`` an array of independent draws is returned.
    """
    if not volume > 0:
        raise DomainError("volume must be positive")
    v = _draw(triple, volume, rng.generator(), () if size is None else size)
    return float(v) if size is None else v


def sample_noise_batch(triple: LevyTriple, lattice: LatticeSpec, rng: RngStream,
                       n: int) -> np.ndarray:
    """``n`` independent noise fields stacked along a leading axis.

    Values are cell integrals divided by the cell volume, so that the
    lattice pairing ``delta**d * sum(f * F)`` is the noise tested against f.
    """
    vol = lattice.volume
    return _draw(triple, vol, rng.generator(), (n,) + lattice.shape) / vol


def sample_noise(triple: LevyTriple, lattice: LatticeSpec, rng: RngStream) -> LatticeField:
    """One white-noise field with independent values at every site."""
    return LatticeField(lattice, sample_noise_batch(triple, lattice, rng, 1)[0], "noise")
