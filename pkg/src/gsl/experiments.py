"""Configuration-driven numerical experiments emitting CSV tables.

Each experiment consumes a flat key=value config, derives one
independent random stream per trial from the master seed, and returns a
ResultTable whose metadata echoes the full configuration.  Identical
(config, seed) pairs produce byte-identical CSV output.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import strategies
from .errors import ConfigError, VerificationError
from .graphs import Graph, generate_rgg_torus, generate_scale_free, is_connected, toroidal_distances
from .graphs import build_laplacian, build_normalized_laplacian
from .localization import PERFECT_LOCALIZATION_TOL, concentrated_basis
from .sampling import local_set_frame, _reduced_frame_operator
from .spectral import SpectralBasis, eigendecompose, make_projectors
from .sparse_noise import l1_recover
from .tables import VERSION, ResultTable
from .uncertainty import boundary_beta, boundary_curves, corners, extremal_vector

RANK_TOL = 1e-10


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    trials: int
    master_seed: int
    output_path: str | None
    workers: int
    params: dict


def parse_config_file(path) -> dict[str, str]:
    """Flat 'key = value' lines; '#' starts a comment."""
    raw: dict[str, str] = {}
    with open(path, "r", encoding="utf-8", newline=None) as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            if "=" not in body:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {body!r}")
            key, val = body.split("=", 1)
            raw[key.strip()] = val.strip()
    return raw


def _parse_int(v: str) -> int:
    return int(v)


def _parse_float(v: str) -> float:
    return float(v)


def _parse_bool(v: str) -> bool:
    low = v.strip().lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def _parse_floats(v: str) -> tuple[float, ...]:
    return tuple(float(x) for x in v.split(",") if x.strip() != "")


def _parse_ints(v: str) -> tuple[int, ...]:
    return tuple(int(x) for x in v.split(",") if x.strip() != "")


def _parse_strs(v: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in v.split(",") if x.strip() != "")


_COMMON_SCHEMA = {
    "trials": (_parse_int, None),  # default filled per experiment
    "master_seed": (_parse_int, 0),
    "output_path": (str, ""),
    "workers": (_parse_int, 1),
}


def build_config(experiment: str, raw: dict[str, str]) -> ExperimentConfig:
    """Validate raw key=value strings against the experiment's schema."""
    if experiment not in EXPERIMENTS:
        raise ConfigError(
            f"unknown experiment {experiment!r}; choose from {sorted(EXPERIMENTS)}"
        )
    schema, default_trials, _ = EXPERIMENTS[experiment]
    merged = dict(_COMMON_SCHEMA)
    merged.update(schema)
    params: dict = {}
    for key, value in raw.items():
        if key == "experiment":
            if value != experiment:
                raise ConfigError(f"config names experiment {value!r}, running {experiment!r}")
            continue
        if key not in merged:
            raise ConfigError(f"unknown config key {key!r} for {experiment}")
        parser = merged[key][0]
        try:
            params[key] = parser(value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}") from exc
    for key, (_, default) in merged.items():
        if key not in params:
            params[key] = default
    trials = params.pop("trials")
    if trials is None:
        trials = default_trials
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    master_seed = params.pop("master_seed")
    output_path = params.pop("output_path") or None
    workers = params.pop("workers")
    if workers < 1:
        raise ConfigError("workers must be >= 1")
    return ExperimentConfig(
        experiment=experiment,
        trials=trials,
        master_seed=master_seed,
        output_path=output_path,
        workers=workers,
        params=params,
    )


def _echo_metadata(cfg: ExperimentConfig) -> dict[str, str]:
    meta = {
        "experiment": cfg.experiment,
        "trials": str(cfg.trials),
        "master_seed": str(cfg.master_seed),
        "workers": str(cfg.workers),
        "version": VERSION,
    }
    for key, value in cfg.params.items():
        if isinstance(value, tuple):
            meta[key] = ",".join(str(v) for v in value)
        else:
            meta[key] = str(value)
    return meta


# ---------------------------------------------------------------------------
# seeding and shared helpers


def derive_seed(master_seed: int, *key: int) -> int:
    """Portable 64-bit seed derived by hashing (master_seed, key...)."""
    ss = np.random.SeedSequence((master_seed, *key))
    return int(ss.generate_state(1, np.uint64)[0])


def derive_rng(master_seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((master_seed, *key)))


def _connected_rgg(n: int, r0: float, master_seed: int, trial: int, require: bool) -> Graph:
    for attempt in range(1000):
        g = generate_rgg_torus(n, r0, derive_seed(master_seed, trial, 100 + attempt))
        if not require or is_connected(g):
            return g
    raise VerificationError(f"no connected geometric graph in 1000 draws at r0={r0}")


def _basis_for(g: Graph, laplacian: str) -> SpectralBasis:
    if laplacian == "combinatorial":
        return eigendecompose(build_laplacian(g))
    if laplacian == "normalized":
        return eigendecompose(build_normalized_laplacian(g))
    raise ConfigError(f"unknown laplacian kind {laplacian!r}")


def _map_trials(fn: Callable[[int], object], trials: int, workers: int) -> list:
    """Run per-trial work, optionally across threads; order is by trial index."""
    if workers <= 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(trials)))


def _expand_with_cutoff(psi: np.ndarray, sigma_sq: np.ndarray, observed: np.ndarray) -> np.ndarray:
    """Concentrated-basis expansion dropping modes below the rank cutoff.

    Rank-deficient sample sets lose the dropped modes entirely, which
    shows up as a large (but finite) reconstruction error.
    """
    keep = sigma_sq > RANK_TOL
    if not np.any(keep):
        return np.zeros_like(observed)
    coeff = (psi[:, keep].T @ observed.T) / sigma_sq[keep, None]
    return (psi[:, keep] @ coeff).T


# ---------------------------------------------------------------------------
# experiment: minimal bandwidth against vertex-set size (spill-over trade-off)

_SPILLOVER_SCHEMA = {
    "n": (_parse_int, 100),
    "r0": (_parse_float, 0.35),
    "eps2_list": (_parse_floats, (0.0, 0.01, 0.05, 0.1)),
    "radius_steps": (_parse_int, 20),
    "require_connected": (_parse_bool, True),
    "laplacian": (str, "combinatorial"),
}


def run_spillover_bandwidth(cfg: ExperimentConfig) -> ResultTable:
    """Minimal band size keeping the out-of-set energy under each budget.

    Vertex sets are toroidal balls grown around a random center; for each
    ball the band {0..k-1} grows until the spill-over 1 - sigma_max^2
    drops below eps^2.
    """
    p = cfg.params
    n, steps = p["n"], p["radius_steps"]
    eps_desc = sorted(set(p["eps2_list"]), reverse=True)
    if any(e < 0 for e in eps_desc):
        raise ConfigError("eps2 values must be >= 0")
    radius_max = math.sqrt(2.0) / 2.0
    radii = [(i + 1) / steps * radius_max for i in range(steps)]

    def one_trial(t: int):
        g = _connected_rgg(n, p["r0"], cfg.master_seed, t, p["require_connected"])
        basis = _basis_for(g, p["laplacian"])
        center = int(derive_rng(cfg.master_seed, t, 0).integers(n))
        dist = toroidal_distances(g.coordinates)[center]
        out = []
        for r_ball in radii:
            s = np.flatnonzero(dist <= r_ball)
            rows_s = basis.U[s, :]
            k = 1
            ks = {}
            for eps2 in eps_desc:
                while k <= n:
                    top = np.linalg.svd(rows_s[:, :k], compute_uv=False)[0]
                    spill = max(0.0, 1.0 - min(top, 1.0) ** 2)
                    if spill <= eps2 + PERFECT_LOCALIZATION_TOL:
                        break
                    k += 1
                ks[eps2] = k
            out.append((s.size, ks))
        return out

    per_trial = _map_trials(one_trial, cfg.trials, cfg.workers)
    rows = []
    for i, r_ball in enumerate(radii):
        sizes = [per_trial[t][i][0] for t in range(cfg.trials)]
        for eps2 in sorted(eps_desc):
            kvals = [per_trial[t][i][1][eps2] for t in range(cfg.trials)]
            rows.append([r_ball, eps2, float(np.mean(sizes)), float(np.mean(kvals))])
    return ResultTable(
        columns=["ball_radius", "eps2", "mean_size_s", "mean_min_band"],
        rows=rows,
        metadata=_echo_metadata(cfg),
    )


# ---------------------------------------------------------------------------
# experiment: fraction of vanishing basis entries vs. coverage radius

_VANISHING_SCHEMA = {
    "n": (_parse_int, 100),
    "r0_grid": (_parse_floats, tuple(round(0.05 * i, 2) for i in range(0, 16))),
    "threshold": (_parse_float, 1e-10),
    "laplacian": (str, "combinatorial"),
}


def run_vanishing_entries(cfg: ExperimentConfig) -> ResultTable:
    """Percentage of near-zero basis entries over geometric graph draws."""
    p = cfg.params
    n, thr = p["n"], p["threshold"]

    def one_trial(t: int):
        pcts = []
        for i, r0 in enumerate(p["r0_grid"]):
            g = generate_rgg_torus(n, r0, derive_seed(cfg.master_seed, t, i))
            basis = _basis_for(g, p["laplacian"])
            pcts.append(100.0 * float(np.mean(np.abs(basis.U) < thr)))
        return pcts

    per_trial = _map_trials(one_trial, cfg.trials, cfg.workers)
    rows = []
    for i, r0 in enumerate(p["r0_grid"]):
        rows.append([r0, float(np.mean([per_trial[t][i] for t in range(cfg.trials)]))])
    return ResultTable(
        columns=["r0", "vanishing_pct"],
        rows=rows,
        metadata=_echo_metadata(cfg),
    )


# ---------------------------------------------------------------------------
# experiment: l1 recovery error vs. number of corrupted vertices

_L1_SCHEMA = {
    "n": (_parse_int, 100),
    "m_attach": (_parse_int, 2),
    "f_sizes": (_parse_ints, (3, 5, 10)),
    "max_corrupted": (_parse_int, 30),
    "corrupt_step": (_parse_int, 1),
    "noise_amp_factor": (_parse_float, 10.0),
    "laplacian": (str, "combinatorial"),
}


def run_l1_threshold(cfg: ExperimentConfig) -> ResultTable:
    """Mean per-node squared error of l1 recovery as corruption spreads.

    Corrupted vertices accumulate along a per-trial random order, so the
    corruption sets are nested within a trial and shared across band
    sizes (common random numbers).
    """
    p = cfg.params
    n = p["n"]
    counts = list(range(0, p["max_corrupted"] + 1, p["corrupt_step"]))
    f_sizes = p["f_sizes"]
    if any(f < 1 or f > n for f in f_sizes):
        raise ConfigError("f_sizes must lie in [1, n]")

    def one_trial(t: int):
        g = generate_scale_free(n, p["m_attach"], derive_seed(cfg.master_seed, t, 0))
        basis = _basis_for(g, p["laplacian"])
        rng = derive_rng(cfg.master_seed, t, 1)
        order = rng.permutation(n)
        raw_noise = rng.uniform(-1.0, 1.0, size=n)
        mse = np.zeros((len(f_sizes), len(counts)))
        for fi, f_size in enumerate(f_sizes):
            f = np.arange(f_size)
            coeff = rng.standard_normal(f_size)
            s = basis.U[:, f] @ coeff
            amp = p["noise_amp_factor"] * float(np.linalg.norm(s)) / math.sqrt(n)
            for ci, count in enumerate(counts):
                r = s.copy()
                r[order[:count]] += amp * raw_noise[:count]
                sol = l1_recover(r, basis, f)
                mse[fi, ci] = float(np.sum((sol.s_hat - s) ** 2) / n)
        return mse

    per_trial = _map_trials(one_trial, cfg.trials, cfg.workers)
    stack = np.array(per_trial)  # (trials, f, counts)
    rows = []
    for fi, f_size in enumerate(f_sizes):
        for ci, count in enumerate(counts):
            rows.append(
                [
                    f_size,
                    count,
                    float(np.mean(stack[:, fi, ci])),
                    float(np.max(stack[:, fi, ci])),
                ]
            )
    return ResultTable(
        columns=["f_size", "corrupted", "mean_mse", "max_mse"],
        rows=rows,
        metadata=_echo_metadata(cfg),
    )


# ---------------------------------------------------------------------------
# experiment: NMSE of reconstruction from noisy samples per selection strategy

_STRATEGY_SCHEMA = {
    "n": (_parse_int, 30),
    "m_attach": (_parse_int, 2),
    "f_size": (_parse_int, 5),
    "m_list": (_parse_ints, tuple(range(5, 16))),
    "methods": (_parse_strs, ("random", "maxfro", "maxsigmin", "maxvol", "minpinv", "exhaustive")),
    "noise_draws": (_parse_int, 20),
    "noise_var": (_parse_float, 1.0),
    "exhaustive_max_subsets": (_parse_int, 10**6),
    "laplacian": (str, "combinatorial"),
}


def _select_for(method: str, ut: np.ndarray, m: int, seed: int, guard: int):
    if method == "random":
        return strategies.select_random(ut.shape[1], m, seed)
    if method == "maxfro":
        return strategies.select_maxfro(ut, m)
    if method == "maxvol":
        return strategies.select_maxvol(ut, m)
    if method == "minpinv":
        return strategies.select_minpinv(ut, m)
    if method == "maxsigmin":
        return strategies.select_maxsigmin(ut, m)
    if method == "exhaustive":
        if math.comb(ut.shape[1], m) > guard:
            return None
        return strategies.select_exhaustive(ut, m, strategies.Method.MINPINV)
    raise ConfigError(f"unknown selection method {method!r}")


def run_strategy_comparison(cfg: ExperimentConfig) -> ResultTable:
    """Per-trial NMSE of noisy recovery for each sampling strategy and size.

    Noise realizations are shared across methods within a trial; NMSE is
    the per-node squared error divided by the noise variance.  The
    exhaustive benchmark appears only at sizes within its subset guard.
    """
    p = cfg.params
    n, f_size = p["n"], p["f_size"]
    if not (1 <= f_size <= n):
        raise ConfigError("f_size must lie in [1, n]")
    if any(m < 1 or m > n for m in p["m_list"]):
        raise ConfigError("m_list entries must lie in [1, n]")
    f = np.arange(f_size)
    guard = min(p["exhaustive_max_subsets"], 10**6)

    def one_trial(t: int):
        g = generate_scale_free(n, p["m_attach"], derive_seed(cfg.master_seed, t, 0))
        basis = _basis_for(g, p["laplacian"])
        ut = strategies.u_tilde(basis, f)
        rng = derive_rng(cfg.master_seed, t, 1)
        coeff = rng.standard_normal(f_size)
        s = basis.U[:, f] @ coeff
        noise = math.sqrt(p["noise_var"]) * rng.standard_normal((p["noise_draws"], n))
        out = []
        for method in p["methods"]:
            for m in p["m_list"]:
                sel = _select_for(method, ut, m, derive_seed(cfg.master_seed, t, 2, m), guard)
                if sel is None:
                    continue
                pair = make_projectors(basis, sel.sample_set, f)
                cb = concentrated_basis(pair)
                observed = (s + noise) * pair.d_indicator
                x_hat = _expand_with_cutoff(cb.psi, cb.sigma_sq, observed)
                err = float(np.mean(np.sum((x_hat - s) ** 2, axis=1)))
                out.append([method, m, t, err / (n * p["noise_var"])])
        return out

    per_trial = _map_trials(one_trial, cfg.trials, cfg.workers)
    rows = [row for trial_rows in per_trial for row in trial_rows]
    return ResultTable(
        columns=["method", "m", "trial", "nmse"],
        rows=rows,
        metadata=_echo_metadata(cfg),
    )


# ---------------------------------------------------------------------------
# experiment: frame recovery NMSE against the local-set radius

_FRAME_SCHEMA = {
    "n": (_parse_int, 100),
    "r0": (_parse_float, 0.1883),
    "f_size": (_parse_int, 5),
    "m_list": (_parse_ints, (5, 10)),
    "strategies": (_parse_strs, ("random", "maxvol")),
    "r1_over_r0_grid": (_parse_floats, tuple(round(0.3 * i, 2) for i in range(12))),
    "noise_var": (_parse_float, 1.0),
    "require_connected": (_parse_bool, True),
    "laplacian": (str, "combinatorial"),
}


def run_frame_radius_sweep(cfg: ExperimentConfig) -> ResultTable:
    """Predicted NMSE of local-set frame recovery as the set radius grows.

    For each strategy and sample count, the per-sample local sets are
    toroidal balls of radius r1; the closed-form error of the frame
    reconstruction under unit-variance noise is averaged over graph
    draws.  Singular frame operators contribute their pseudo-inverse
    error and are counted in singular_fraction.
    """
    p = cfg.params
    n, f_size = p["n"], p["f_size"]
    f = np.arange(f_size)
    if any(m < 1 or m > n for m in p["m_list"]):
        raise ConfigError("m_list entries must lie in [1, n]")

    def one_trial(t: int):
        g = _connected_rgg(n, p["r0"], cfg.master_seed, t, p["require_connected"])
        basis = _basis_for(g, p["laplacian"])
        ut = strategies.u_tilde(basis, f)
        out = {}
        for strategy in p["strategies"]:
            for m in p["m_list"]:
                sel = _select_for(strategy, ut, m, derive_seed(cfg.master_seed, t, 3, m), 0)
                pair = make_projectors(basis, sel.sample_set, f)
                for ratio in p["r1_over_r0_grid"]:
                    spec = local_set_frame(g, sel.sample_set, ratio * p["r0"], pair)
                    red = _reduced_frame_operator(pair, spec)
                    svals = np.linalg.svd(red, compute_uv=False)
                    singular = bool(svals.min() <= RANK_TOL)
                    yd = spec.Y * pair.d_indicator[None, :]
                    err_op = np.linalg.pinv(red, rcond=RANK_TOL) @ (pair.u_f.T @ yd)
                    nmse = float(np.sum(err_op**2) / n)
                    out[(strategy, m, ratio)] = (nmse, singular)
        return out

    per_trial = _map_trials(one_trial, cfg.trials, cfg.workers)
    rows = []
    for strategy in p["strategies"]:
        for m in p["m_list"]:
            for ratio in p["r1_over_r0_grid"]:
                vals = [per_trial[t][(strategy, m, ratio)] for t in range(cfg.trials)]
                rows.append(
                    [
                        strategy,
                        m,
                        ratio,
                        float(np.mean([v[0] for v in vals])),
                        float(np.mean([1.0 if v[1] else 0.0 for v in vals])),
                    ]
                )
    return ResultTable(
        columns=["strategy", "m", "r1_over_r0", "nmse", "singular_fraction"],
        rows=rows,
        metadata=_echo_metadata(cfg),
    )


# ---------------------------------------------------------------------------
# experiment: admissible-region boundary curves for one instance

_BOUNDARY_SCHEMA = {
    "n": (_parse_int, 20),
    "r0": (_parse_float, 0.4),
    "s_size": (_parse_int, 5),
    "f_size": (_parse_int, 4),
    "alpha_steps": (_parse_int, 50),
    "require_connected": (_parse_bool, True),
    "laplacian": (str, "combinatorial"),
}


def run_uncertainty_boundary(cfg: ExperimentConfig) -> ResultTable:
    """Boundary curves of the concentration region, with attainment check.

    Random vertex/frequency sets are drawn (redrawn while the corner
    value is degenerate); closed-form extremal vectors are verified to
    land on the upper-right curve before the table is emitted.
    """
    p = cfg.params
    n = p["n"]
    if p["s_size"] < 1 or p["f_size"] < 1 or p["s_size"] + p["f_size"] > n:
        raise ConfigError("need s_size, f_size >= 1 with s_size + f_size <= n")
    g = _connected_rgg(n, p["r0"], cfg.master_seed, 0, p["require_connected"])
    basis = _basis_for(g, p["laplacian"])
    pair = None
    for attempt in range(1000):
        rng = derive_rng(cfg.master_seed, 1, attempt)
        s = rng.choice(n, size=p["s_size"], replace=False)
        f = rng.choice(n, size=p["f_size"], replace=False)
        cand = make_projectors(basis, s, f)
        c = corners(cand)
        if 1e-6 < c.s_bd < 1.0 - 1e-8:
            pair = cand
            break
    if pair is None:
        raise VerificationError("no nondegenerate (S, F) instance found")
    c = corners(pair)
    cb = concentrated_basis(pair)
    alphas = np.linspace(0.0, 1.0, p["alpha_steps"])
    curves = boundary_curves(c, alphas)
    for alpha in alphas:
        ev = extremal_vector(cb, pair, float(alpha))
        target = boundary_beta(ev.alpha, c.s_bd)
        if abs(ev.beta - target) > 1e-7:
            raise VerificationError(
                f"extremal vector misses the boundary by {abs(ev.beta - target):.2e}"
            )
    meta = _echo_metadata(cfg)
    meta.update(
        {
            "sigma_bd": format(c.s_bd, ".9g"),
            "sigma_bdc": format(c.s_bdc, ".9g"),
            "sigma_bcd": format(c.s_bcd, ".9g"),
            "sigma_bcdc": format(c.s_bcdc, ".9g"),
            "vertex_set": " ".join(str(v) for v in pair.vertex_set),
            "freq_set": " ".join(str(v) for v in pair.freq_set),
        }
    )
    rows = [
        [
            float(alphas[i]),
            float(curves["upper_right"][i]),
            float(curves["upper_left"][i]),
            float(curves["lower_right"][i]),
            float(curves["lower_left"][i]),
        ]
        for i in range(alphas.size)
    ]
    return ResultTable(
        columns=[
            "alpha",
            "beta_upper_right",
            "beta_upper_left",
            "beta_lower_right",
            "beta_lower_left",
        ],
        rows=rows,
        metadata=meta,
    )


# ---------------------------------------------------------------------------

EXPERIMENTS: dict[str, tuple[dict, int, Callable[[ExperimentConfig], ResultTable]]] = {
    "spillover-bandwidth": (_SPILLOVER_SCHEMA, 10, run_spillover_bandwidth),
    "vanishing-entries": (_VANISHING_SCHEMA, 100, run_vanishing_entries),
    "l1-threshold": (_L1_SCHEMA, 50, run_l1_threshold),
    "strategy-comparison": (_STRATEGY_SCHEMA, 50, run_strategy_comparison),
    "frame-radius-sweep": (_FRAME_SCHEMA, 30, run_frame_radius_sweep),
    "uncertainty-boundary": (_BOUNDARY_SCHEMA, 1, run_uncertainty_boundary),
}


def run_experiment(cfg: ExperimentConfig) -> ResultTable:
    runner = EXPERIMENTS[cfg.experiment][2]
    return runner(cfg)
