"""Regular lattices and real fields on them.

Site ``p`` along an axis (array position ``0 <= p < N``) sits at coordinate
``(p - N/2) * delta``, so the array position ``N/2`` is the origin.  The
first slice ``p = 0`` of every axis (coordinate ``-L/2``) has no mirror
partner under ``x -> -x``.  It is a ghost layer: integration weights vanish
there and convolution ignores its input values.  The remaining
``(N - 1)**d`` sites form a box that is symmetric under every coordinate
reflection, which keeps reflection identities exact on the lattice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, LatticeMismatch, OffLattice

_SNAP_TOL = 1e-9


@dataclass(frozen=True)
class LatticeSpec:
    """A cubic grid with ``n_per_axis`` sites of spacing ``delta`` per axis."""

    d: int
    n_per_axis: int
    delta: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"d must be a positive integer, got {self.d}")
        n = self.n_per_axis
        if int(n) != n or n < 2 or (int(n) & (int(n) - 1)) != 0:
            raise DomainError(f"n_per_axis must be a power of two >= 2, got {n}")
        if not (np.isfinite(self.delta) and self.delta > 0):
            raise DomainError(f"delta must be positive, got {self.delta}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "n_per_axis", int(n))
        object.__setattr__(self, "delta", float(self.delta))

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n_per_axis,) * self.d

    @property
    def size(self) -> int:
        return self.n_per_axis**self.d

    @property
    def volume(self) -> float:
        """Cell volume ``delta**d``."""
        return self.delta**self.d

    @property
    def side_length(self) -> float:
        return self.n_per_axis * self.delta

    @property
    def origin(self) -> tuple[int, ...]:
        return (self.n_per_axis // 2,) * self.d

    def axis_coords(self) -> np.ndarray:
        n = self.n_per_axis
        return (np.arange(n) - n // 2) * self.delta

    def coords(self) -> list[np.ndarray]:
        """Coordinate arrays of full lattice shape, one per axis."""
        ax = self.axis_coords()
        return list(np.meshgrid(*([ax] * self.d), indexing="ij"))

    def radius(self) -> np.ndarray:
        """Euclidean distance of every site from the origin."""
        return np.sqrt(sum(c**2 for c in self.coords()))

    def radius_from(self, point) -> np.ndarray:
        """Euclidean distance of every site from ``point``."""
        pt = np.atleast_1d(np.asarray(point, dtype=float))
        return np.sqrt(sum((c - p) ** 2 for c, p in zip(self.coords(), pt)))

    def interior_mask(self) -> np.ndarray:
        """True off the ghost layer."""
        m = np.ones(self.shape, dtype=bool)
        for ax in range(self.d):
            idx = [slice(None)] * self.d
            idx[ax] = 0
            m[tuple(idx)] = False
        return m

    def weights(self) -> np.ndarray:
        """Riemann-sum weights: ``delta**d`` off the ghost layer, 0 on it."""
        return self.interior_mask() * self.volume

    def index_of(self, point) -> tuple[int, ...]:
        """Array position of a coordinate point; it must be a site."""
        pt = np.atleast_1d(np.asarray(point, dtype=float))
        if pt.shape != (self.d,):
            raise OffLattice(f"point {point!r} does not have {self.d} components")
        raw = pt / self.delta + self.n_per_axis // 2
        idx = np.rint(raw)
        if np.any(np.abs(raw - idx) > _SNAP_TOL):
            raise OffLattice(f"point {point!r} is not a lattice site")
        if np.any(idx < 1) or np.any(idx >= self.n_per_axis):
            raise OffLattice(f"point {point!r} lies outside the lattice box")
        return tuple(int(i) for i in idx)

    def sites_for_shift(self, displacement) -> tuple[int, ...]:
        """Integer site offsets for a physical displacement vector."""
        v = np.atleast_1d(np.asarray(displacement, dtype=float))
        if v.shape != (self.d,):
            raise OffLattice(f"displacement must have {self.d} components")
        raw = v / self.delta
        s = np.rint(raw)
        if np.any(np.abs(raw - s) > _SNAP_TOL * max(1.0, float(np.max(np.abs(raw))))):
            raise OffLattice(f"displacement {displacement!r} is not a multiple of delta")
        return tuple(int(i) for i in s)


@dataclass(frozen=True, eq=False)
class LatticeField:
    """Real values on every site of a lattice.

    The value array is copied on construction and made read-only.
    """

    spec: LatticeSpec
    values: np.ndarray
    name: str = "field"

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != self.spec.shape:
            raise LatticeMismatch(
                f"values have shape {v.shape}, lattice needs {self.spec.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise DomainError("field values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def integrate(self) -> float:
        """Riemann sum ``delta**d * sum(values)`` over non-ghost sites."""
        return float(np.sum(self.spec.weights() * self.values))

    def pair(self, other: "LatticeField") -> float:
        """Lattice inner product ``delta**d * sum(f * g)``."""
        require_same_lattice(self, other)
        return float(np.sum(self.spec.weights() * self.values * other.values))

    def __add__(self, other):
        require_same_lattice(self, other)
        return LatticeField(self.spec, self.values + other.values, self.name)

    def __sub__(self, other):
        require_same_lattice(self, other)
        return LatticeField(self.spec, self.values - other.values, self.name)

    def __mul__(self, c):
        return LatticeField(self.spec, self.values * float(c), self.name)

    __rmul__ = __mul__


def require_same_lattice(*fields) -> LatticeSpec:
    specs = {f.spec for f in fields}
    if len(specs) > 1:
        raise LatticeMismatch(f"fields live on different lattices: {sorted(map(str, specs))}")
    return fields[0].spec


def constant_field(spec: LatticeSpec, value: float = 1.0, name="constant") -> LatticeField:
    return LatticeField(spec, np.full(spec.shape, float(value)), name)


def delta_field(spec: LatticeSpec, point=None, name="delta") -> LatticeField:
    """Unit-mass lattice delta: ``delta**-d`` at one site, 0 elsewhere."""
    v = np.zeros(spec.shape)
    idx = spec.origin if point is None else spec.index_of(point)
    v[idx] = 1.0 / spec.volume
    return LatticeField(spec, v, name)


BUMP_CUTOFF = 12.0


def gaussian_bump(spec: LatticeSpec, center, width: float, *, mass: float = 1.0,
                  positive_time: bool = False, name="bump") -> LatticeField:
    """Gaussian bump with total lattice mass ``mass``.

    With ``positive_time`` the bump is cut to sites with ``x0 > 0`` before
    normalizing.  Values beyond ``BUMP_CUTOFF`` widths (relative size
    ``exp(-72)``) are set to zero so the support is compact.
    """
    c = np.atleast_1d(np.asarray(center, dtype=float))
    if c.shape != (spec.d,):
        raise DomainError(f"center must have {spec.d} components")
    if width <= 0:
        raise DomainError("width must be positive")
    xs = spec.coords()
    r2 = sum((x - ci) ** 2 for x, ci in zip(xs, c))
    v = np.exp(-0.5 * r2 / width**2) * spec.interior_mask() * (r2 <= (BUMP_CUTOFF * width) ** 2)
    if positive_time:
        v = v * (xs[0] > 0)
    total = np.sum(v) * spec.volume
    if total <= 0:
        raise DomainError("bump has no mass on the lattice")
    return LatticeField(spec, v * (mass / total), name)


# Binary format: four text header lines then little-endian float64 values.

def write_field(path, f: LatticeField) -> None:
    header = f"{f.spec.d}\n{f.spec.n_per_axis}\n{f.spec.delta!r}\n{f.name}\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("utf-8"))
        fh.write(np.ascontiguousarray(f.values, dtype="<f8").tobytes())


def read_field(path) -> LatticeField:
    with open(path, "rb") as fh:
        lines = [fh.readline().decode("utf-8").rstrip("\n") for _ in range(4)]
        raw = fh.read()
    spec = LatticeSpec(int(lines[0]), int(lines[1]), float(lines[2]))
    v = np.frombuffer(raw, dtype="<f8")
    if v.size != spec.size:
        raise LatticeMismatch(f"{path}: expected {spec.size} values, found {v.size}")
    return LatticeField(spec, v.reshape(spec.shape), lines[3])
