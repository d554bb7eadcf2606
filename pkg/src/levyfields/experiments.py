"""The experiment catalog behind the command-line runner.

Each experiment declares its parameters (type, default, description),
validates them against the owning module's preconditions, and writes its
outputs into a run directory.  A runner returns a list of :class:`Check`
results; any failed check makes the run exit with status 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import stats

from .continuation import (euclidean_restriction_check, hilbert_rho_quadrature,
                           hilbert_rho_transform, in_backward_cone, laplace_identity_check,
                           minkowski_square, spectral_grid, spectral_support_check,
                           wightman2_density, wightman_trunc_density)
from .errors import ConfigError, SearchFailed
from .io import write_csv, write_json, write_matrix_csv
from .kernel import KernelSpec, kernel_position
from .lattice import LatticeSpec, gaussian_bump, write_field
from .levy import RngStream, cumulant, gaussian_limit_triple, sample_site
from .reflection import SearchConfig, find_rp_violation, rp_gram, witness_gram
from .schwinger import (TestFunction, cluster_scan, decay_rate, mc_schwinger, schwinger)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class Param:
    kind: str  # float, int, bool, str, floats, ints, bumps, family, pairs
    default: object
    help: str


@dataclass(frozen=True)
class Experiment:
    name: str
    summary: str
    params: dict
    run: Callable


def _rel(a, b):
    return abs(a - b) / abs(b) if b != 0 else abs(a - b)


# Parameter validation -----------------------------------------------------

def _is_num(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _coerce(kind, v, path):
    if kind == "float":
        if not _is_num(v):
            raise ConfigError(path, f"expected a number, got {v!r}")
        return float(v)
    if kind == "int":
        if not _is_num(v) or int(v) != v:
            raise ConfigError(path, f"expected an integer, got {v!r}")
        return int(v)
    if kind == "bool":
        if not isinstance(v, bool):
            raise ConfigError(path, "expected true or false")
        return v
    if kind == "str":
        if not isinstance(v, str):
            raise ConfigError(path, "expected a string")
        return v
    if kind in ("floats", "ints"):
        if not isinstance(v, list) or not v:
            raise ConfigError(path, "expected a nonempty list")
        sub = "float" if kind == "floats" else "int"
        return [_coerce(sub, x, f"{path}[{i}]") for i, x in enumerate(v)]
    if kind in ("bumps", "pairs"):
        if not isinstance(v, list) or not v:
            raise ConfigError(path, "expected a nonempty list of lists")
        return [_coerce("floats", x, f"{path}[{i}]") for i, x in enumerate(v)]
    if kind == "family":
        if not isinstance(v, list) or not v:
            raise ConfigError(path, "expected a nonempty list of index lists")
        return [_coerce("ints", x, f"{path}[{i}]") for i, x in enumerate(v)]
    raise AssertionError(kind)


def validate_params(name, table, kernel: KernelSpec, lattice: LatticeSpec, triple) -> dict:
    exp = EXPERIMENTS[name]
    for k in table:
        if k not in exp.params:
            raise ConfigError(f"params.{k}", f"unknown parameter for {name}")
    out = {}
    for k, p in exp.params.items():
        out[k] = _coerce(p.kind, table[k], f"params.{k}") if k in table else p.default
    _PRECONDITIONS[name](out, kernel, lattice, triple)
    return out


def _need(cond, path, msg):
    if not cond:
        raise ConfigError(path, msg)


def _check_bumps(bumps, lattice, path, positive_time=False):
    for i, b in enumerate(bumps):
        _need(len(b) == lattice.d + 1, f"{path}[{i}]", f"expected {lattice.d} coordinates and a width")
        _need(b[-1] > 0, f"{path}[{i}]", "width must be positive")
        half = 0.5 * lattice.side_length
        _need(all(abs(c) < half for c in b[:-1]), f"{path}[{i}]", "center outside the lattice box")
        if positive_time:
            _need(b[0] > 0, f"{path}[{i}]", "bump must sit at positive time")


def _pre_moments(p, kernel, lattice, triple):
    _need(all(1 <= n <= 12 for n in p["orders"]), "params.orders", "orders must lie in 1..12")
    _need(len(p["bumps"]) >= max(p["orders"]), "params.bumps", "need one bump per order")
    _check_bumps(p["bumps"], lattice, "params.bumps")
    _need(p["n_samples"] >= 2, "params.n_samples", "must be >= 2")
    _need(p["n_se"] > 0, "params.n_se", "must be positive")


def _pre_cluster(p, kernel, lattice, triple):
    _need(p["width"] > 0, "params.width", "must be positive")
    _need(p["fit_min"] < p["fit_max"], "params.fit_min", "must be below fit_max")
    _need(cumulant(triple, 2) > 0, "noise", "the two-point cumulant must be positive")
    for i, lam in enumerate(p["lambdas"]):
        shift = lam / lattice.delta
        _need(abs(shift - round(shift)) < 1e-9, f"params.lambdas[{i}]", "not a multiple of delta")
    fits = [x for x in p["lambdas"] if p["fit_min"] <= x <= p["fit_max"]]
    _need(len(fits) >= 2, "params.lambdas", "need at least two values inside the fit range")
    _need(max(p["lambdas"]) + 6 * p["width"] < 0.5 * lattice.side_length, "params.lambdas",
          "translated bump leaves the lattice box")


def _pre_rp(p, kernel, lattice, triple):
    _check_bumps(p["bumps"], lattice, "params.bumps", positive_time=True)
    _need(p["mode"] in ("full", "conditional"), "params.mode", "must be 'full' or 'conditional'")
    for i, t in enumerate(p["family"]):
        _need(len(t) >= 1, f"params.family[{i}]", "tuples must be nonempty")
        _need(2 * len(t) <= 12, f"params.family[{i}]", "tuple order must be <= 6")
        for j in t:
            _need(0 <= j < len(p["bumps"]), f"params.family[{i}]", f"bump index {j} out of range")


def _pre_rp_search(p, kernel, lattice, triple):
    _need(p["x0"] > 0, "params.x0", "must be positive")
    _need(1 <= p["n_max"] <= 6, "params.n_max", "must lie in 1..6")
    for i, pair in enumerate(p["phi2_pairs"]):
        _need(len(pair) == 2 and min(pair) > 0, f"params.phi2_pairs[{i}]",
              "expected two positive times")
    _need(all(0 < f <= 0.5 for f in p["lambda_fractions"]), "params.lambda_fractions",
          "fractions must lie in (0, 0.5]")


def _pre_laplace(p, kernel, lattice, triple):
    _need(all(0 < a < 1 for a in p["alphas"]), "params.alphas", "each alpha must lie in (0, 1)")
    _need(all(x > 0 for x in p["xs"]), "params.xs", "each x must be positive")


def _pre_kl(p, kernel, lattice, triple):
    _need(all(0 < a < 1 for a in p["alphas"]), "params.alphas", "each alpha must lie in (0, 1)")
    _need(all(x > 0 for x in p["xs"]), "params.xs", "each x must be positive")
    _need(0 < p["restriction_alpha"] < 0.5, "params.restriction_alpha", "must lie in (0, 1/2)")
    _need(all(x != 0 for x in p["restriction_xs"]), "params.restriction_xs", "x must be nonzero")


def _pre_wightman(p, kernel, lattice, triple):
    _need(0 < p["alpha"] < 0.5, "params.alpha", "must lie in (0, 1/2)")
    _need(p["n"] >= 2, "params.n", "must be >= 2")
    _need(p["momentum_dim"] >= 1, "params.momentum_dim", "must be >= 1")
    _need(p["points"] >= 1, "params.points", "must be positive")
    _need(all(0 < a < 1 for a in p["hilbert_alphas"]), "params.hilbert_alphas", "each alpha in (0, 1)")
    _need(all(abs(k - kernel.m0**2) > 1e-6 for k in p["hilbert_k_sq"]), "params.hilbert_k_sq",
          "values must avoid the mass shell")


def _pre_glimit(p, kernel, lattice, triple):
    _need(all(n >= 1 for n in p["ns"]) and len(p["ns"]) >= 2, "params.ns", "need >= 2 positive values")
    _need(p["sigma"] > 0, "params.sigma", "must be positive")
    _need(p["volume"] > 0, "params.volume", "must be positive")
    _need(p["n_draws"] >= 100, "params.n_draws", "must be >= 100")


# Runners ------------------------------------------------------------------

def _bump_tf(lattice, spec, positive_time=False, name="bump"):
    f = gaussian_bump(lattice, spec[:-1], spec[-1], positive_time=positive_time, name=name)
    return TestFunction(f, positive_time)


def run_moments(cfg, out: Path, threads: int):
    p = cfg.params
    phis = [_bump_tf(cfg.lattice, b, name=f"bump{i}") for i, b in enumerate(p["bumps"])]
    rows, checks = [], []
    for n in p["orders"]:
        analytic = schwinger(cfg.kernel, cfg.noise, phis[:n])
        est = mc_schwinger(cfg.kernel, cfg.noise, phis[:n], p["n_samples"],
                           RngStream(cfg.seed, n), threads=threads)
        z = (est.value - analytic) / est.std_error if est.std_error > 0 else 0.0
        ok = abs(z) <= p["n_se"]
        rows.append([n, analytic, est.value, est.std_error, z, ok])
        checks.append(Check(f"moment order {n}", ok, f"|z| = {abs(z):.3f}, tolerance {p['n_se']} SE"))
    write_csv(out / "moments.csv",
              ["order", "analytic", "mc_value", "std_error", "z_score", "pass"], rows)
    return checks


def run_cluster(cfg, out: Path, threads: int):
    p = cfg.params
    centre = [0.0] * cfg.lattice.d
    phi = _bump_tf(cfg.lattice, centre + [p["width"]])
    direction = [1.0] + [0.0] * (cfg.lattice.d - 1)
    scan = cluster_scan(cfg.kernel, cfg.noise, [phi], [phi], direction, p["lambdas"])
    rows = []
    for lam, v in scan:
        rows.append([lam, v, abs(v), float(np.log(abs(v))) if v != 0 else float("-inf")])
    write_csv(out / "cluster.csv", ["lambda", "value", "abs_value", "log_abs_value"], rows)
    fit = [s for s in scan if p["fit_min"] <= s[0] <= p["fit_max"]]
    rate = decay_rate(fit)
    lo, hi = p["rate_lo"] * cfg.kernel.m0, p["rate_hi"] * cfg.kernel.m0
    ok = lo <= rate <= hi
    write_json(out / "cluster_fit.json", {"rate": rate, "rate_over_m0": rate / cfg.kernel.m0,
                                          "band": [lo, hi], "fit_range": [p["fit_min"], p["fit_max"]]})
    return [Check("cluster decay rate", ok, f"rate {rate:.4f}, band [{lo:.3f}, {hi:.3f}]")]


def run_rp(cfg, out: Path, threads: int):
    p = cfg.params
    bumps = [_bump_tf(cfg.lattice, b, True, f"bump{i}") for i, b in enumerate(p["bumps"])]
    family = [tuple(bumps[j] for j in t) for t in p["family"]]
    rep = rp_gram(cfg.kernel, cfg.noise, family, p["mode"])
    write_matrix_csv(out / "gram.csv", rep.matrix)
    summary = dict(rep.summary(), norm=float(np.linalg.norm(rep.matrix, 2)),
                   asymmetry=rep.asymmetry, psd=rep.is_psd())
    write_json(out / "gram.json", summary)
    checks = [Check("gram symmetry", rep.asymmetry <= 1e-12 * max(1.0, np.abs(rep.matrix).max()),
                    f"max asymmetry {rep.asymmetry:.3g}")]
    if p["expect_psd"]:
        checks.append(Check("gram positivity", rep.is_psd(),
                            f"min eig {rep.min_eigenvalue:.4g}, tolerance -1e-8 * norm"))
    return checks


def run_rp_search(cfg, out: Path, threads: int):
    p = cfg.params
    sc = SearchConfig(x0=p["x0"], width1=p["width1"] or None, eps1=p["eps1"], width2=p["width2"],
                      phi2_pairs=tuple(tuple(x) for x in p["phi2_pairs"]), n_max=p["n_max"])
    try:
        w = find_rp_violation(cfg.kernel, cfg.noise, cfg.lattice, sc)
    except SearchFailed as e:
        write_json(out / "search_failed.json", {"reason": e.reason, "diagnostics": e.diagnostics})
        return [Check("violation search", False, e.reason)]
    write_json(out / "witness.json", w.to_dict())
    write_field(out / "phi1.field", w.phi1.field)
    write_field(out / "phi2.field", w.phi2.field)
    rows, all_neg = [], True
    for f in p["lambda_fractions"]:
        lam = f * w.lambda0
        g = witness_gram(cfg.kernel, cfg.noise, w, lam)
        e = float(np.linalg.eigvalsh(g)[0])
        all_neg &= e < 0
        rows.append([f, lam, g[1, 1], e])
    write_csv(out / "lambda_scan.csv", ["fraction", "lambda", "form_value", "min_eig"], rows)
    return [Check("negative integral", w.integral_value < 0, f"integral {w.integral_value:.4g}, n = {w.n_power}"),
            Check("negative eigenvalue below lambda0/2", all_neg, f"lambda0 = {w.lambda0:.6g}")]


def run_laplace(cfg, out: Path, threads: int):
    p = cfg.params
    rows, checks = [], []
    for a in p["alphas"]:
        tol = p["rtol_high_alpha"] if a >= p["high_alpha"] else p["rtol"]
        for x in p["xs"]:
            lhs, rhs = laplace_identity_check(a, cfg.kernel.m0, x)
            r = _rel(lhs, rhs)
            rows.append([a, x, lhs, rhs, r, tol, r <= tol])
            if r > tol:
                checks.append(Check(f"laplace alpha={a} x={x}", False, f"rel {r:.3g} > {tol:g}"))
    write_csv(out / "laplace.csv", ["alpha", "x", "lhs", "rhs", "rel_diff", "tolerance", "pass"], rows)
    return checks or [Check("laplace identity grid", True, f"{len(rows)} points within tolerance")]


def run_kallen_lehmann(cfg, out: Path, threads: int):
    p = cfg.params
    m0 = cfg.kernel.m0
    rows, checks = [], []
    for a in p["alphas"]:
        for x in p["xs"]:
            mass = kernel_position(KernelSpec(a, m0, 1), [x])
            fourier = laplace_identity_check(a, m0, x)[0] / (2 * np.pi)
            r = _rel(mass, fourier)
            rows.append([a, x, mass, fourier, r, p["rtol"], r <= p["rtol"]])
            checks.append(Check(f"mass vs fourier alpha={a} x={x}", r <= p["rtol"], f"rel {r:.3g}"))
    write_csv(out / "kallen_lehmann.csv",
              ["alpha", "x", "mass_integral", "fourier", "rel_diff", "tolerance", "pass"], rows)
    rows = []
    pts = euclidean_restriction_check(p["restriction_alpha"], m0, p["c2"], p["restriction_xs"])
    for x, (sd, sl) in zip(p["restriction_xs"], pts):
        r = _rel(sl, sd)
        rows.append([x, sd, sl, r, p["restriction_rtol"], r <= p["restriction_rtol"]])
        checks.append(Check(f"restriction x={x}", r <= p["restriction_rtol"], f"rel {r:.3g}"))
    write_csv(out / "restriction.csv",
              ["x", "s_direct", "s_laplace", "rel_diff", "tolerance", "pass"], rows)
    return checks


def run_wightman(cfg, out: Path, threads: int):
    p = cfg.params
    m0, a, d = cfg.kernel.m0, p["alpha"], p["momentum_dim"]
    checks, reports = [], []

    g2 = spectral_grid(2, d, m0, p["points"], p["box"], seed=cfg.seed)
    k = g2[:, 0]
    vals = wightman2_density(a, m0, p["c_n"], k)
    inside = in_backward_cone(k, m0)
    write_csv(out / "wightman2.csv", ["k0", "k_spatial_norm", "value", "in_support"],
              [[kk[0], float(np.linalg.norm(kk[1:])), v, bool(s)] for kk, v, s in zip(k, vals, inside)])

    def w2(kk):
        return wightman2_density(a, m0, p["c_n"], kk[:, 0])

    def wn(kk):
        return wightman_trunc_density(a, m0, p["n"], p["c_n"], kk)

    def widened(kk):
        # Negative control: extra mass on the forward cone.
        x = kk[:, 0]
        return w2(kk) + ((minkowski_square(x) > m0**2) & (x[:, 0] > 0))

    gn = spectral_grid(p["n"], d, m0, p["points"], p["box"], seed=cfg.seed + 1)
    spec2 = {"n": 2, "momentum_dim": d, "points": p["points"], "box": p["box"], "seed": cfg.seed}
    specn = dict(spec2, n=p["n"], seed=cfg.seed + 1)
    for name, dens, n, grid, gs, expect in (("two-point", w2, 2, g2, spec2, True),
                                             (f"{p['n']}-point", wn, p["n"], gn, specn, True),
                                             ("widened control", widened, 2, g2, spec2, False)):
        rep = spectral_support_check(dens, n, m0, grid, name, gs)
        reports.append(rep.to_dict())
        ok = rep.passed == expect
        checks.append(Check(f"support {name}", ok,
                            f"{rep.n_violations} violations, {rep.n_in_support} in-support points"))
    write_json(out / "support.json", reports)

    ident = wightman_trunc_density(a, m0, 2, p["c_n"], g2)
    nz = vals != 0
    worst = float(np.max(np.abs(ident[nz] / vals[nz] - 1))) if nz.any() else 0.0
    same_zero = bool(np.all(ident[~nz] == 0))
    ok = worst <= p["identity_rtol"] and same_zero
    write_json(out / "identity.json", {"max_rel_diff": worst, "zero_sets_agree": same_zero,
                                       "tolerance": p["identity_rtol"]})
    checks.append(Check("n=2 density equals two-point formula", ok, f"max rel {worst:.3g}"))

    rows = []
    for ha in p["hilbert_alphas"]:
        for ksq in p["hilbert_k_sq"]:
            closed = hilbert_rho_transform(ha, m0, ksq)
            quad = hilbert_rho_quadrature(ha, m0, ksq)
            pv = ksq > m0**2
            tol = p["pv_rtol"] if pv else p["hilbert_rtol"]
            r = _rel(quad, closed)
            rows.append([ha, ksq, closed, quad, r, pv, tol, r <= tol])
            if r > tol:
                checks.append(Check(f"hilbert alpha={ha} k^2={ksq}", False, f"rel {r:.3g} > {tol:g}"))
    write_csv(out / "hilbert.csv", ["alpha", "k_sq", "closed_form", "quadrature", "rel_diff",
                                    "principal_value", "tolerance", "pass"], rows)
    return checks


def run_gaussian_limit(cfg, out: Path, threads: int):
    p = cfg.params
    rows = []
    for n in p["ns"]:
        t = gaussian_limit_triple(n, p["sigma"])
        c2, c4 = cumulant(t, 2), cumulant(t, 4)
        draws = sample_site(t, p["volume"], RngStream(cfg.seed, n), size=p["n_draws"])
        kurt = float(stats.kurtosis(draws, fisher=True))
        expected = c4 / (p["volume"] * c2**2)
        rows.append([n, c2, c4, p["sigma"] ** 2 / n**2, kurt, expected])
    write_csv(out / "gaussian_limit.csv",
              ["n", "c2", "c4", "c4_expected", "excess_kurtosis", "expected_kurtosis"], rows)
    ns = np.array([r[0] for r in rows], dtype=float)
    k = np.array([r[4] for r in rows])
    checks = [Check("c4 = sigma^2/n^2", all(r[2] == r[3] for r in rows), "exact comparison")]
    if np.all(k > 0):
        slope = float(np.polyfit(np.log(ns), np.log(k), 1)[0])
        ok = abs(slope - p["slope_target"]) <= p["slope_tol"]
        detail = f"slope {slope:.4f}, target {p['slope_target']} +- {p['slope_tol']}"
    else:
        slope, ok, detail = float("nan"), False, "nonpositive sampled kurtosis"
    write_json(out / "gaussian_limit_fit.json", {"slope": slope, "target": p["slope_target"],
                                                 "tolerance": p["slope_tol"]})
    checks.append(Check("kurtosis slope", ok, detail))
    return checks


_D1_BUMPS = [[-0.5, 0.3], [0.0, 0.3], [0.4, 0.3], [0.8, 0.3]]
_RP_BUMPS = [[0.5, 0.3], [1.0, 0.3], [1.5, 0.4], [0.8, 0.2]]

EXPERIMENTS = {e.name: e for e in [
    Experiment("moments", "Monte Carlo moments of X = G*F against the analytic partition sum", {
        "orders": Param("ints", [1, 2, 3, 4], "moment orders n"),
        "n_samples": Param("int", 200000, "Monte Carlo samples per order"),
        "bumps": Param("bumps", _D1_BUMPS, "test functions as [center..., width]; order n uses the first n"),
        "n_se": Param("float", 5.0, "allowed deviation in standard errors"),
    }, run_moments),
    Experiment("cluster", "decay of the truncated two-point function under translation", {
        "width": Param("float", 0.3, "bump width"),
        "lambdas": Param("floats", [float(x) for x in np.arange(0.0, 10.5, 0.5)], "translation distances"),
        "fit_min": Param("float", 5.0, "start of the fit range"),
        "fit_max": Param("float", 10.0, "end of the fit range"),
        "rate_lo": Param("float", 0.9, "lower rate bound in units of m0"),
        "rate_hi": Param("float", 1.2, "upper rate bound in units of m0"),
    }, run_cluster),
    Experiment("rp", "reflection-positivity Gram matrix over a family of test-function tuples", {
        "bumps": Param("bumps", _RP_BUMPS, "positive-time bumps as [center..., width]"),
        "family": Param("family", [[0], [1, 2], [0, 2, 3], [0, 1, 2, 3]], "tuples of bump indices"),
        "mode": Param("str", "full", "full (moments, with empty tuple) or conditional (truncated)"),
        "expect_psd": Param("bool", True, "fail the run if the matrix is not positive semidefinite"),
    }, run_rp),
    Experiment("rp-search", "constructive search for a reflection-positivity violation", {
        "x0": Param("float", 1.0, "time of the concentrating bump"),
        "width1": Param("float", 0.0, "width of the concentrating bump (0 means one spacing)"),
        "eps1": Param("float", 0.25, "radius excluded when normalizing q"),
        "width2": Param("float", 0.15, "width of the two bumps in phi2"),
        "phi2_pairs": Param("pairs", [list(x) for x in SearchConfig().phi2_pairs], "candidate bump times for phi2"),
        "n_max": Param("int", 6, "largest power n tried"),
        "lambda_fractions": Param("floats", [0.001, 0.01, 0.1, 0.25, 0.5], "couplings tested, as fractions of lambda0"),
    }, run_rp_search),
    Experiment("laplace", "Fourier integral of the symbol against its Laplace representation", {
        "alphas": Param("floats", [0.1, 0.25, 0.5, 0.75, 0.9], "exponents alpha"),
        "xs": Param("floats", [0.5, 1.0, 2.0], "positions x"),
        "rtol": Param("float", 1e-5, "relative tolerance"),
        "high_alpha": Param("float", 0.9, "alpha from which rtol_high_alpha applies"),
        "rtol_high_alpha": Param("float", 1e-4, "relative tolerance at high alpha"),
    }, run_laplace),
    Experiment("kallen-lehmann", "mass-superposition kernel against Fourier quadrature, and the two-point restriction", {
        "alphas": Param("floats", [0.25, 0.4], "exponents alpha (one dimension)"),
        "xs": Param("floats", [0.5, 1.0, 2.0], "positions x"),
        "rtol": Param("float", 1e-4, "relative tolerance"),
        "restriction_alpha": Param("float", 0.25, "alpha of the two-point restriction check"),
        "restriction_xs": Param("floats", [1.0, 2.0], "positions of the restriction check"),
        "restriction_rtol": Param("float", 1e-3, "relative tolerance of the restriction check"),
        "c2": Param("float", 1.0, "two-point noise cumulant"),
    }, run_kallen_lehmann),
    Experiment("wightman", "truncated Wightman densities: spectral support, n=2 identity, Hilbert transforms", {
        "alpha": Param("float", 0.25, "exponent alpha in (0, 1/2)"),
        "n": Param("int", 3, "order of the truncated density"),
        "momentum_dim": Param("int", 2, "space-time dimension of the momentum grid"),
        "points": Param("int", 10000, "grid points per scan"),
        "box": Param("float", 4.0, "momentum components drawn from [-box, box]"),
        "c_n": Param("float", 1.0, "noise cumulant multiplying the density"),
        "identity_rtol": Param("float", 1e-12, "tolerance of the n=2 identity"),
        "hilbert_alphas": Param("floats", [0.1, 0.25, 0.4, 0.6, 0.9], "alphas of the transform table"),
        "hilbert_k_sq": Param("floats", [-3.0, 0.0, 0.5, 2.0, 5.0], "k^2 values of the transform table"),
        "hilbert_rtol": Param("float", 1e-6, "tolerance below the shell"),
        "pv_rtol": Param("float", 1e-4, "tolerance of principal values"),
    }, run_wightman),
    Experiment("gaussian-limit", "Poisson noise approaching Gaussian noise: c4 and sampled kurtosis", {
        "ns": Param("ints", [1, 2, 4, 8], "family index n (atom at 1/n)"),
        "sigma": Param("float", 1.0, "target Gaussian scale"),
        "volume": Param("float", 0.1, "cell volume of each site draw"),
        "n_draws": Param("int", 1000000, "site draws per n"),
        "slope_target": Param("float", -2.0, "expected log-log slope of kurtosis against n"),
        "slope_tol": Param("float", 0.3, "allowed slope deviation"),
    }, run_gaussian_limit),
]}

_PRECONDITIONS = {
    "moments": _pre_moments, "cluster": _pre_cluster, "rp": _pre_rp, "rp-search": _pre_rp_search,
    "laplace": _pre_laplace, "kallen-lehmann": _pre_kl, "wightman": _pre_wightman,
    "gaussian-limit": _pre_glimit,
}


def describe(name: str) -> str:
    """Parameter table of one experiment."""
    e = EXPERIMENTS[name]
    lines = [f"{e.name}: {e.summary}", "", f"  {'parameter':<18} {'type':<7} {'default':<28} description"]
    for k, p in e.params.items():
        d = repr(p.default)
        d = d if len(d) <= 26 else d[:23] + "..."
        lines.append(f"  {k:<18} {p.kind:<7} {d:<28} {p.help}")
    return "\n".join(lines)
