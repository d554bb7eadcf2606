"""Experiment configuration files (TOML) and their validation.

A config has top-level ``experiment`` and ``seed`` keys and the tables
``[kernel]``, ``[lattice]``, ``[noise]`` and ``[params]``.  Every problem is
reported as a :class:`ConfigError` carrying the dotted field path.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError, DomainError
from .kernel import KernelSpec
from .lattice import LatticeSpec
from .levy import LevyTriple, center

SEED_ENV = "LEVYFIELDS_SEED"

_TOP_KEYS = {"experiment", "seed", "kernel", "lattice", "noise", "params"}
_KERNEL_KEYS = {"alpha", "m0"}
_LATTICE_KEYS = {"d", "n_per_axis", "delta"}
_NOISE_KEYS = {"a", "sigma", "atoms", "center"}


@dataclass
class ExperimentConfig:
    experiment: str
    seed: int
    kernel: KernelSpec
    lattice: LatticeSpec
    noise: LevyTriple
    center_noise: bool
    params: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    def echo(self) -> dict:
        """Normalized config, as written to the run manifest."""
        return {
            "experiment": self.experiment,
            "seed": self.seed,
            "kernel": {"alpha": self.kernel.alpha, "m0": self.kernel.m0},
            "lattice": {"d": self.lattice.d, "n_per_axis": self.lattice.n_per_axis,
                        "delta": self.lattice.delta},
            "noise": dict(self.noise.to_dict(), center=self.center_noise),
            "params": self.params,
        }


def _number(table, key, path, default=None, integer=False):
    if key not in table:
        if default is None:
            raise ConfigError(path, "missing required value")
        return default
    v = table[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(path, f"expected a number, got {v!r}")
    if integer:
        if int(v) != v:
            raise ConfigError(path, f"expected an integer, got {v!r}")
        return int(v)
    return float(v)


def _table(raw, key):
    t = raw.get(key, {})
    if not isinstance(t, dict):
        raise ConfigError(key, "expected a table")
    return t


def _unknown(table, allowed, prefix):
    for k in table:
        if k not in allowed:
            raise ConfigError(f"{prefix}{k}", "unknown key")


def parse_config(raw: dict, env=None) -> ExperimentConfig:
    """Validate a parsed TOML document; ``env`` defaults to ``os.environ``."""
    from .experiments import EXPERIMENTS, validate_params

    env = os.environ if env is None else env
    _unknown(raw, _TOP_KEYS, "")
    name = raw.get("experiment")
    if not isinstance(name, str):
        raise ConfigError("experiment", "missing experiment name")
    if name not in EXPERIMENTS:
        raise ConfigError("experiment", f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}")

    seed = _number(raw, "seed", "seed", default=0, integer=True)
    if SEED_ENV in env:
        try:
            seed = int(env[SEED_ENV])
        except ValueError:
            raise ConfigError("seed", f"{SEED_ENV}={env[SEED_ENV]!r} is not an integer") from None
    if not 0 <= seed < 2**64:
        raise ConfigError("seed", "must be a 64-bit unsigned integer")

    lat = _table(raw, "lattice")
    _unknown(lat, _LATTICE_KEYS, "lattice.")
    d = _number(lat, "d", "lattice.d", default=1, integer=True)
    n = _number(lat, "n_per_axis", "lattice.n_per_axis", default=256, integer=True)
    delta = _number(lat, "delta", "lattice.delta", default=0.05)
    if d < 1:
        raise ConfigError("lattice.d", "must be >= 1")
    if n < 2 or n & (n - 1):
        raise ConfigError("lattice.n_per_axis", "must be a power of two >= 2")
    if not delta > 0:
        raise ConfigError("lattice.delta", "must be positive")
    lattice = LatticeSpec(d, n, delta)

    ker = _table(raw, "kernel")
    _unknown(ker, _KERNEL_KEYS, "kernel.")
    alpha = _number(ker, "alpha", "kernel.alpha", default=0.5)
    m0 = _number(ker, "m0", "kernel.m0", default=1.0)
    if not 0 < alpha <= 1:
        raise ConfigError("kernel.alpha", f"must lie in (0, 1], got {alpha}")
    if not m0 > 0:
        raise ConfigError("kernel.m0", f"must be positive, got {m0}")
    kernel = KernelSpec(alpha, m0, d)

    noi = _table(raw, "noise")
    _unknown(noi, _NOISE_KEYS, "noise.")
    a = _number(noi, "a", "noise.a", default=0.0)
    sigma = _number(noi, "sigma", "noise.sigma", default=0.0)
    if sigma < 0:
        raise ConfigError("noise.sigma", "must be >= 0")
    atoms = noi.get("atoms", [])
    if not isinstance(atoms, list):
        raise ConfigError("noise.atoms", "expected a list of [location, weight] pairs")
    for i, atom in enumerate(atoms):
        if not (isinstance(atom, list) and len(atom) == 2
                and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in atom)):
            raise ConfigError(f"noise.atoms[{i}]", "expected [location, weight]")
        if atom[0] == 0:
            raise ConfigError(f"noise.atoms[{i}]", "location must be nonzero")
        if not atom[1] > 0:
            raise ConfigError(f"noise.atoms[{i}]", "weight must be positive")
    do_center = noi.get("center", False)
    if not isinstance(do_center, bool):
        raise ConfigError("noise.center", "expected true or false")
    try:
        triple = LevyTriple.from_atoms(a, sigma, atoms)
    except DomainError as e:
        raise ConfigError("noise", str(e)) from None
    if do_center:
        triple = center(triple)

    params = validate_params(name, _table(raw, "params"), kernel, lattice, triple)
    return ExperimentConfig(name, seed, kernel, lattice, triple, do_center, params, raw)


def load_config(path, env=None) -> ExperimentConfig:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as e:
        raise ConfigError("<file>", str(e)) from None
    except tomllib.TOMLDecodeError as e:
        raise ConfigError("<syntax>", str(e)) from None
    return parse_config(raw, env)
