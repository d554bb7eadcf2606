"""Time reflection, Gram-matrix positivity tests and the search for violations.

Reflection ``theta (x0, x) = (-x0, x)`` maps array position ``p`` on the time
axis to ``(N - p) mod N``.  Because the ghost layer ``p = 0`` is ignored by
convolution and integration, ``G * (theta f) = theta (G * f)`` holds exactly
up to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from .errors import DomainError, SearchFailed, SizeError, SupportError
from .kernel import KernelSpec, convolve_values, kernel_position
from .lattice import LatticeField, LatticeSpec, gaussian_bump
from .levy import LevyTriple, cumulant
from .partitions import MAX_N
from .schwinger import ConvolutionCache, TestFunction, schwinger, truncated_schwinger

PSD_RTOL = 1e-8


def reflect_values(values: np.ndarray, axis: int = 0) -> np.ndarray:
    return np.roll(np.flip(values, axis=axis), 1, axis=axis)


def reflect_time(phi):
    """Mirror a test function (or bare lattice field) in the time coordinate."""
    if isinstance(phi, LatticeField):
        return LatticeField(phi.spec, reflect_values(phi.values), phi.name)
    f = LatticeField(phi.spec, reflect_values(phi.values), f"theta {phi.name}")
    return TestFunction(f, False)


def _require_positive_time(phi: TestFunction) -> None:
    x0 = phi.spec.coords()[0]
    if not phi.half_space_positive or np.any(phi.values[x0 <= 0] != 0):
        raise SupportError(f"{phi.name} must be supported at positive times")


def symmetric_parts(phi: TestFunction) -> tuple[LatticeField, LatticeField]:
    """``phi^s = (phi + theta phi)/2`` and ``phi^a = (phi - theta phi)/2``."""
    th = reflect_values(phi.values)
    return (LatticeField(phi.spec, 0.5 * (phi.values + th), "phi_s"),
            LatticeField(phi.spec, 0.5 * (phi.values - th), "phi_a"))


def q_fn(kspec: KernelSpec, phi: TestFunction) -> LatticeField:
    """``q(phi) = (G * theta phi) (G * phi)`` for a positive-time ``phi``."""
    _require_positive_time(phi)
    g = convolve_values(kspec, phi.spec, phi.values)
    gt = convolve_values(kspec, phi.spec, reflect_values(phi.values))
    return LatticeField(phi.spec, g * gt, f"q({phi.name})")


def q_fn_squares(kspec: KernelSpec, phi: TestFunction) -> LatticeField:
    """The same ``q`` computed as ``(G * phi^s)**2 - (G * phi^a)**2``."""
    _require_positive_time(phi)
    s, a = symmetric_parts(phi)
    gs = convolve_values(kspec, phi.spec, s.values)
    ga = convolve_values(kspec, phi.spec, a.values)
    return LatticeField(phi.spec, gs**2 - ga**2, f"q({phi.name})")


def half_space_weights(spec: LatticeSpec) -> np.ndarray:
    """Weights for integrals over ``x0 >= 0``, halved on the slice ``x0 = 0``."""
    x0 = spec.coords()[0]
    w = spec.weights() * (x0 > 0)
    return w + 0.5 * spec.weights() * (x0 == 0)


@dataclass
class GramReport:
    matrix: np.ndarray
    min_eigenvalue: float
    family: list
    mode: str
    asymmetry: float = 0.0

    @property
    def order(self) -> int:
        return max((len(t) for t in self.family), default=0)

    def is_psd(self, rtol: float = PSD_RTOL) -> bool:
        scale = np.linalg.norm(self.matrix, 2)
        return self.min_eigenvalue >= -rtol * scale

    def summary(self) -> dict:
        return {"mode": self.mode, "min_eig": self.min_eigenvalue, "order": self.order}


def rp_gram(kspec: KernelSpec, triple: LevyTriple, family: Sequence[Sequence[TestFunction]],
            mode: str = "full") -> GramReport:
    """Gram matrix ``M_kl = S_{k+l}(theta A_k, A_l)`` over a family of tuples.

    ``full`` prepends the empty tuple (``S_0 = 1``) and uses moments;
    ``conditional`` uses truncated functions and nonempty tuples only.
    """
    if mode not in ("full", "conditional"):
        raise DomainError(f"mode must be 'full' or 'conditional', got {mode!r}")
    family = [tuple(t) for t in family]
    for t in family:
        for phi in t:
            _require_positive_time(phi)
        if mode == "conditional" and not t:
            raise DomainError("conditional mode needs nonempty tuples")
    rows = ([()] if mode == "full" else []) + family
    if 2 * max((len(t) for t in rows), default=0) > MAX_N:
        raise SizeError(f"Gram entries would need more than {MAX_N} arguments")
    reflected = {id(phi): reflect_time(phi) for t in rows for phi in t}
    cache = ConvolutionCache()
    n = len(rows)
    mat = np.empty((n, n))
    for i, left in enumerate(rows):
        for j, right in enumerate(rows):
            args = [reflected[id(p)] for p in left] + list(right)
            if mode == "full":
                mat[i, j] = schwinger(kspec, triple, args, cache)
            else:
                mat[i, j] = truncated_schwinger(kspec, triple, args, cache)
    asym = float(np.max(np.abs(mat - mat.T))) if n else 0.0
    sym = 0.5 * (mat + mat.T)
    min_eig = float(np.linalg.eigvalsh(sym)[0]) if n else float("inf")
    return GramReport(sym, min_eig, family, mode, asym)


@dataclass(frozen=True)
class SearchConfig:
    """Parameters of the constructive violation search.

    Lengths are physical units.  ``phi2_pairs`` lists the two bump times of
    the second test function; the first pair giving a negative integral wins.
    """

    x0: float = 1.0
    width1: float | None = None  # defaults to one lattice spacing
    eps1: float = 0.25
    width2: float = 0.15
    phi2_pairs: tuple[tuple[float, float], ...] = ((0.8, 3.0), (0.8, 2.2), (0.7, 3.5), (0.5, 1.5))
    n_max: int = 6
    lambda_tol: float = 1e-6
    lambda_step: float = 1.02


@dataclass
class ViolationWitness:
    phi1: TestFunction
    phi2: TestFunction
    n_power: int
    integral_value: float
    lambda0: float
    params: dict = field(default_factory=dict)
    polynomial: np.ndarray | None = None  # coefficients of P(lambda), lowest order first

    def to_dict(self) -> dict:
        return {"n_power": self.n_power, "integral_value": self.integral_value,
                "lambda0": self.lambda0, "bump_parameters": self.params}


class MultisetMoments:
    """Moments of repeated arguments as polynomials in a coupling ``lambda``.

    Arguments come in types with multiplicities; all copies of one type are
    the same test function.  Scaling every truncated function by ``lambda``
    turns the moment into ``sum_k a_k lambda**k``, with ``k`` the number of
    blocks in a partition.  :meth:`poly` returns ``a_0, a_1, ..`` for a count
    vector.
    """

    def __init__(self, kspec, triple, convs: Sequence[np.ndarray], weights: np.ndarray):
        self.triple = triple
        self.convs = list(convs)
        self.weights = weights
        self._t = {}
        self._s = {(0,) * len(convs): np.array([1.0])}
        self._c = {}

    def block(self, b: tuple[int, ...]) -> float:
        if b not in self._t:
            n = sum(b)
            if n not in self._c:
                self._c[n] = cumulant(self.triple, n)
            if self._c[n] == 0.0:
                self._t[b] = 0.0
            else:
                prod = self.weights.copy()
                for u, k in zip(self.convs, b):
                    if k:
                        prod *= u**k
                self._t[b] = self._c[n] * float(np.sum(prod))
        return self._t[b]

    def poly(self, m: tuple[int, ...]) -> np.ndarray:
        m = tuple(m)
        if m in self._s:
            return self._s[m]
        first = next(i for i, k in enumerate(m) if k)
        out = np.zeros(sum(m) + 1)
        # Blocks containing one fixed copy of the first present type.
        ranges = [range(1, k + 1) if i == first else range(k + 1) for i, k in enumerate(m)]
        for b in np.ndindex(*[len(r) for r in ranges]):
            b = tuple(r[j] for r, j in zip(ranges, b))
            tb = self.block(b)
            if tb == 0.0:
                continue
            ways = 1
            for i, (k, bi) in enumerate(zip(m, b)):
                ways *= comb(k - 1, bi - 1) if i == first else comb(k, bi)
            rest = self.poly(tuple(k - bi for k, bi in zip(m, b)))
            out[1:len(rest) + 1] += ways * tb * rest
        self._s[m] = out
        return out


def _first_positive_root(coef: np.ndarray, step: float, tol: float) -> float:
    """Smallest positive root of ``P(lambda)/lambda`` by scan and bisection.

    Needs ``coef[1] < 0``.  Below ``min(1, |a_1| / sum_{k>=2} |a_k|)`` the
    quotient is certainly negative, so the geometric scan starts there.
    """
    q = np.trim_zeros(coef[1:], "b")
    if len(q) == 0 or q[0] >= 0:
        raise SearchFailed("the linear coupling coefficient is not negative",
                           {"coefficients": coef.tolist()})
    rev = q[::-1]

    def f(x):
        return np.polyval(rev, x)

    higher = np.sum(np.abs(q[1:]))
    if higher == 0:
        raise SearchFailed("the coupling polynomial has no positive root",
                           {"coefficients": coef.tolist()})
    lo = 0.5 * min(1.0, abs(q[0]) / higher)
    # Cauchy bound: every root has modulus below 1 + max|a_k / a_top|.
    cap = 1.0 + np.max(np.abs(q[:-1] / q[-1]))
    hi = lo * step
    while f(hi) < 0:
        lo, hi = hi, hi * step
        if lo > cap:
            raise SearchFailed("no sign change of the coupling polynomial",
                               {"coefficients": coef.tolist()})
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _bump(spec, t, width, name):
    c = [t] + [0.0] * (spec.d - 1)
    return TestFunction(gaussian_bump(spec, c, width, positive_time=True, name=name), True)


def _point_index(spec: LatticeSpec, t: float) -> tuple[int, ...]:
    return spec.index_of([t] + [0.0] * (spec.d - 1))


def find_rp_violation(kspec: KernelSpec, triple: LevyTriple, lattice: LatticeSpec,
                      config: SearchConfig = SearchConfig()) -> ViolationWitness:
    """Construct test functions whose Gram form is negative for small coupling.

    ``phi1`` is a narrow positive-time bump at ``x = (x0, 0)`` scaled so
    that ``q(phi1) <= 1/2`` away from ``x``; ``phi2`` is a two-bump
    combination with ``G*phi2 + G*theta phi2 = 0`` at the peak of
    ``q(phi1)``, which makes ``q(phi2)`` negative there.  Powers
    ``q(phi1)**(2n)`` concentrate on that point until the integral of
    ``q(phi1)**(2n) q(phi2)`` turns negative.
    """
    if kspec.d != lattice.d:
        raise DomainError("kernel and lattice dimensions differ")
    orders = [n for n in range(1, config.n_max + 1) if cumulant(triple, 4 * n + 2) != 0.0]
    if not orders:
        raise SearchFailed("c_{4n+2} = 0 for all n", {"n_max": config.n_max})
    x = [config.x0] + [0.0] * (lattice.d - 1)
    g2x = kernel_position(kspec, [2 * config.x0] + [0.0] * (lattice.d - 1))
    if not g2x > 0:
        raise SearchFailed("G(2x) vanishes at the chosen point", {"x0": config.x0})

    w1 = config.width1 or lattice.delta
    raw = _bump(lattice, config.x0, w1, "phi1")
    q_raw = q_fn(kspec, raw).values
    # Away from x within the closed positive half-space; q is theta-even,
    # so the mirror peak at theta x must not enter the bound.
    far = (lattice.radius_from(x) > config.eps1) & (lattice.coords()[0] >= 0)
    D = 2.0 * float(np.max(np.abs(q_raw[far])))
    phi1 = raw.scaled(D ** -0.5)
    q1 = q_raw / D
    hw = half_space_weights(lattice)
    probe = np.unravel_index(np.argmax(np.abs(q1) * (hw > 0)), q1.shape)

    def conv(f):
        return convolve_values(kspec, lattice, f.values)

    tried = []
    for t1, t2 in config.phi2_pairs:
        b1, b2 = _bump(lattice, t1, config.width2, "b1"), _bump(lattice, t2, config.width2, "b2")
        fs1 = conv(b1)[probe] + conv(reflect_time(b1))[probe]
        fs2 = conv(b2)[probe] + conv(reflect_time(b2))[probe]
        c = fs1 / fs2
        phi2 = TestFunction(LatticeField(lattice, b1.values - c * b2.values, "phi2"), True)
        q2 = q_fn(kspec, phi2).values
        values = {}
        for n in orders:
            val = float(np.sum(hw * q1 ** (2 * n) * q2))
            values[n] = val
            if val < 0:
                params = {"x0": config.x0, "width1": w1, "eps1": config.eps1, "D": D,
                          "probe_time": float(lattice.axis_coords()[probe[0]]),
                          "phi2_times": [t1, t2], "width2": config.width2,
                          "phi2_coefficient": float(c), "q2_at_probe": float(q2[probe])}
                coef = coupling_polynomial(kspec, triple, phi1, phi2, n)
                lam0 = _first_positive_root(coef, config.lambda_step, config.lambda_tol)
                return ViolationWitness(phi1, phi2, n, val, lam0, params, coef)
        tried.append({"phi2_times": [t1, t2], "integrals": values})
    raise SearchFailed("no negative integral within n_max and the bump grid", {"tried": tried})


def _witness_moments(kspec, triple, phi1, phi2):
    spec = phi1.spec
    convs = [convolve_values(kspec, spec, reflect_values(phi1.values)),
             convolve_values(kspec, spec, reflect_values(phi2.values)),
             convolve_values(kspec, spec, phi1.values),
             convolve_values(kspec, spec, phi2.values)]
    return MultisetMoments(kspec, triple, convs, spec.weights())


def coupling_polynomial(kspec, triple, phi1, phi2, n) -> np.ndarray:
    """Coefficients of ``P(lambda) = S^lambda(theta Phi, Phi)`` for ``Phi = phi1^{2n} phi2``."""
    return _witness_moments(kspec, triple, phi1, phi2).poly((2 * n, 1, 2 * n, 1))


def witness_gram(kspec, triple, witness: ViolationWitness, lam: float) -> np.ndarray:
    """Two-by-two Gram matrix over ``{empty tuple, Phi}`` at coupling ``lam``.

    Entries are ``S_0 = 1``, ``S^lam(Phi)``, ``S^lam(theta Phi)`` and
    ``S^lam(theta Phi, Phi)``.
    """
    mm = _witness_moments(kspec, triple, witness.phi1, witness.phi2)
    n = witness.n_power

    def at(m):
        return float(np.polyval(mm.poly(m)[::-1], lam))

    s_left = at((2 * n, 1, 0, 0))
    s_right = at((0, 0, 2 * n, 1))
    return np.array([[1.0, s_right], [s_left, at((2 * n, 1, 2 * n, 1))]])
