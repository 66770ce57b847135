"""Monte Carlo experiments: value-distribution convergence and joint normality.

Seed discipline: a single master seed fans out into per-purpose,
per-replicate Philox streams (coefficients, frequencies, baseline), so a
report is a pure function of its config no matter how many workers run
the replicates or in which order they finish.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import rng as rngmod
from .coeffmodels import CoefficientModel, make_model
from .covariance import FrequencyTuple, spectral_norm
from .metrics import (
    TARGET,
    EmpiricalDistribution,
    dkw_sample_size,
    kolmogorov_1d,
    mmd_to_target,
    quadrant_sup,
)
from .numutil import frac_outer
from .rng import derive_stream, make_stream
from .spectral import fourier_values

METRIC_NAMES = ("kolmogorov_re", "kolmogorov_im", "kolmogorov_mod", "quadrant", "mmd")

NON_GAUSSIAN_FLAG = "non-Gaussian regime"

_JOINT_CHUNK = 512


class ConfigError(ValueError):
    """Invalid experiment config; .errors lists one message per field."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one convergence experiment."""

    model: CoefficientModel
    n_schedule: tuple[int, ...]
    m: int
    replicates: int
    metrics: tuple[str, ...] = ("quadrant",)
    mmd_bandwidth: float = 1.0
    master_seed: int = 0
    baseline: bool = True
    epsilon: float | None = None
    target_epsilon: float | None = None
    target_delta: float | None = None

    def to_dict(self) -> dict:
        d = {
            "model": {"family": self.model.family},
            "n_schedule": list(self.n_schedule),
            "m": self.m,
            "replicates": self.replicates,
            "metrics": list(self.metrics),
            "mmd_bandwidth": self.mmd_bandwidth,
            "master_seed": self.master_seed,
            "baseline": self.baseline,
        }
        if self.model.dof is not None:
            d["model"]["dof"] = self.model.dof
        if self.epsilon is not None:
            d["epsilon"] = self.epsilon
        if self.target_epsilon is not None:
            d["target_epsilon"] = self.target_epsilon
        if self.target_delta is not None:
            d["target_delta"] = self.target_delta
        return d

    @staticmethod
    def from_dict(raw: dict) -> "ExperimentConfig":
        errors = []
        if not isinstance(raw, dict):
            raise ConfigError(["config must be a JSON object"])
        known = {
            "model", "n_schedule", "m", "replicates", "metrics", "mmd_bandwidth",
            "master_seed", "baseline", "epsilon", "target_epsilon", "target_delta",
        }
        for key in raw:
            if key not in known:
                errors.append(f"{key}: unknown field")

        model = None
        model_raw = raw.get("model")
        if not isinstance(model_raw, dict) or "family" not in model_raw:
            errors.append("model.family: required")
        else:
            try:
                model = make_model(model_raw["family"], model_raw.get("dof"))
            except ValueError as exc:
                errors.append(f"model: {exc}")

        schedule = raw.get("n_schedule")
        if (
            not isinstance(schedule, list)
            or not schedule
            or not all(isinstance(v, int) and v >= 1 for v in schedule)
        ):
            errors.append("n_schedule: required list of positive integers")
            schedule = []
        elif any(b <= a for a, b in zip(schedule, schedule[1:])):
            errors.append("n_schedule must be strictly increasing")

        t_eps = raw.get("target_epsilon")
        t_delta = raw.get("target_delta")
        if (t_eps is None) != (t_delta is None):
            errors.append("target_epsilon/target_delta: give both or neither")
            t_eps = t_delta = None
        m_floor = None
        if t_eps is not None:
            try:
                # the proof budget splits epsilon/2 for sampling, delta/3 per term
                m_floor = dkw_sample_size(float(t_eps) / 2.0, float(t_delta) / 3.0)
            except ValueError as exc:
                errors.append(f"target_epsilon/target_delta: {exc}")

        m = raw.get("m", m_floor)
        if not isinstance(m, int) or m < 1:
            errors.append("m must be >= 1 (or derivable from target_epsilon/target_delta)")
        elif m_floor is not None and m < m_floor:
            errors.append(
                f"m: below the DKW-justified minimum {m_floor} for the requested target"
            )

        reps = raw.get("replicates")
        if not isinstance(reps, int) or reps < 1:
            errors.append("replicates must be >= 1")

        metrics = raw.get("metrics", ["quadrant"])
        if not isinstance(metrics, list) or not metrics:
            errors.append("metrics: required non-empty list")
            metrics = []
        for name in metrics:
            if name not in METRIC_NAMES:
                errors.append(f"metrics: unknown metric {name!r}")

        bandwidth = raw.get("mmd_bandwidth", 1.0)
        if not isinstance(bandwidth, (int, float)) or bandwidth <= 0.0:
            errors.append("mmd_bandwidth: bandwidth must be positive")

        seed = raw.get("master_seed")
        if not isinstance(seed, int):
            errors.append("master_seed: required integer")

        baseline = raw.get("baseline", True)
        if not isinstance(baseline, bool):
            errors.append("baseline: must be true or false")

        epsilon = raw.get("epsilon")
        if epsilon is not None and (not isinstance(epsilon, (int, float)) or epsilon <= 0):
            errors.append("epsilon: must be positive when given")

        if errors:
            raise ConfigError(errors)
        return ExperimentConfig(
            model=model,
            n_schedule=tuple(schedule),
            m=int(m),
            replicates=int(reps),
            metrics=tuple(metrics),
            mmd_bandwidth=float(bandwidth),
            master_seed=int(seed),
            baseline=bool(baseline),
            epsilon=None if epsilon is None else float(epsilon),
            target_epsilon=None if t_eps is None else float(t_eps),
            target_delta=None if t_delta is None else float(t_delta),
        )


@dataclass(frozen=True)
class ConvergenceReport:
    """Tidy distance records plus per-metric summary statistics."""

    config: ExperimentConfig
    rows: tuple  # (n, metric, replicate, distance, is_baseline)
    summary: dict

    def distances(self, metric: str, n: int, baseline: bool = False) -> np.ndarray:
        return np.array(
            [r[3] for r in self.rows if r[1] == metric and r[0] == n and r[4] == baseline]
        )


def _metric_value(name: str, pts: np.ndarray, bandwidth: float) -> float:
    if name == "kolmogorov_re":
        return kolmogorov_1d(EmpiricalDistribution(pts[:, 0]), TARGET.cdf_1d)
    if name == "kolmogorov_im":
        return kolmogorov_1d(EmpiricalDistribution(pts[:, 1]), TARGET.cdf_1d)
    if name == "kolmogorov_mod":
        mod = np.hypot(pts[:, 0], pts[:, 1])
        return kolmogorov_1d(EmpiricalDistribution(mod), TARGET.modulus_cdf)
    if name == "quadrant":
        return quadrant_sup(EmpiricalDistribution(pts), TARGET)
    if name == "mmd":
        return mmd_to_target(EmpiricalDistribution(pts), TARGET, bandwidth)
    raise ValueError(f"unknown metric {name!r}")


def _replicate_rows(config: ExperimentConfig, r: int) -> list:
    """All distance records for replicate r; self-contained and order-free."""
    seed = config.master_seed
    coeff_rng = make_stream(seed, derive_stream(rngmod.COEFFICIENTS, r))
    freq_rng = make_stream(seed, derive_stream(rngmod.FREQUENCIES, r))
    base_rng = make_stream(seed, derive_stream(rngmod.BASELINE, r))
    n_max = max(config.n_schedule)
    coeffs = config.model.draw(coeff_rng, n_max)
    rows = []
    for n in config.n_schedule:
        nus = freq_rng.uniform(-0.5, 0.5, size=config.m)
        values = fourier_values(coeffs[:n], nus)
        pts = np.column_stack([values.real, values.imag])
        for name in config.metrics:
            rows.append((n, name, r, _metric_value(name, pts, config.mmd_bandwidth), False))
        if config.baseline:
            gpts = TARGET.sample(base_rng, config.m)
            for name in config.metrics:
                rows.append((n, name, r, _metric_value(name, gpts, config.mmd_bandwidth), True))
    return rows


def _worker(args):
    config_dict, r = args
    return _replicate_rows(ExperimentConfig.from_dict(config_dict), r)


def run_convergence(config: ExperimentConfig, workers: int = 1) -> ConvergenceReport:
    """Run the full experiment; output is independent of the worker count."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    reps = range(config.replicates)
    if workers == 1 or config.replicates == 1:
        per_rep = [_replicate_rows(config, r) for r in reps]
    else:
        cd = config.to_dict()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_rep = list(pool.map(_worker, [(cd, r) for r in reps]))
    rows = tuple(row for rep in per_rep for row in rep)
    return ConvergenceReport(config=config, rows=rows, summary=_summarize(config, rows))


def _summarize(config: ExperimentConfig, rows) -> dict:
    ns = list(config.n_schedule)
    out = {}
    n_last = ns[-1]
    for name in config.metrics:
        sample = {
            n: np.array([r[3] for r in rows if r[1] == name and r[0] == n and not r[4]])
            for n in ns
        }
        medians = [float(np.median(sample[n])) for n in ns]
        q90 = [float(np.quantile(sample[n], 0.9)) for n in ns]
        entry = {
            "ns": ns,
            "medians": medians,
            "q90": q90,
            "median_inversions": sum(b >= a for a, b in zip(medians, medians[1:])),
        }
        entry["medians_decreasing"] = entry["median_inversions"] == 0
        if config.baseline:
            base = {
                n: np.array([r[3] for r in rows if r[1] == name and r[0] == n and r[4]])
                for n in ns
            }
            base_median = float(np.median(base[n_last]))
            entry["baseline_medians"] = [float(np.median(base[n])) for n in ns]
            eps = config.epsilon if config.epsilon is not None else 2.0 * base_median
            entry["epsilon"] = eps
            entry["exceedance"] = float(np.mean(sample[n_last] >= eps))
            entry["baseline_exceedance"] = float(np.mean(base[n_last] >= eps))
            ratio = medians[-1] / base_median if base_median > 0 else math.inf
            entry["final_median_ratio"] = float(ratio)
            entry["regime_flag"] = NON_GAUSSIAN_FLAG if ratio > 2.0 else None
        elif config.epsilon is not None:
            entry["epsilon"] = config.epsilon
            entry["exceedance"] = float(np.mean(sample[n_last] >= config.epsilon))
        out[name] = entry
    return {
        "model": config.model.label,
        "m": config.m,
        "replicates": config.replicates,
        "n_schedule": ns,
        "master_seed": config.master_seed,
        "metrics": out,
    }


# ---------------------------------------------------------------------------
# Joint distribution across a fixed frequency tuple
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JointReport:
    """Empirical joint statistics of the (Re, Im) vector over replicates."""

    nus: tuple[float, ...]
    n: int
    replicates: int
    mean: np.ndarray
    cov: np.ndarray
    cov_deviation: float
    coordinate_ks: np.ndarray
    max_cross_corr: float

    def to_dict(self) -> dict:
        return {
            "nus": list(self.nus),
            "n": self.n,
            "replicates": self.replicates,
            "mean": self.mean.tolist(),
            "cov": self.cov.tolist(),
            "cov_deviation": self.cov_deviation,
            "coordinate_ks": self.coordinate_ks.tolist(),
            "max_cross_corr": self.max_cross_corr,
        }


def joint_gaussianity(
    model: CoefficientModel, tup, n: int, replicates: int, seed: int
) -> JointReport:
    """Sample the 2k-vector of (Re, Im) values over fresh coefficient draws.

    Reports how close the empirical covariance is to half the identity and
    how Gaussian each coordinate looks (Kolmogorov distance to N(0, 1/2)),
    plus the largest cross-frequency correlation.
    """
    if isinstance(tup, FrequencyTuple):
        ftup = tup
    else:
        ftup = FrequencyTuple(tuple(tup))
    ftup.validate()
    if replicates < 100:
        raise ValueError("replicates must be >= 100")
    if n < 1:
        raise ValueError("n must be >= 1")
    k = ftup.k
    theta = 2.0 * math.pi * frac_outer(ftup.nus, np.arange(1, n + 1))  # (k, n)
    ct, st = np.cos(theta), np.sin(theta)
    scale = 1.0 / math.sqrt(n)
    rng = make_stream(seed, derive_stream(rngmod.COEFFICIENTS, 0))
    x = np.empty((replicates, 2 * k))
    for lo in range(0, replicates, _JOINT_CHUNK):
        hi = min(lo + _JOINT_CHUNK, replicates)
        a = model.draw(rng, (hi - lo) * n).reshape(hi - lo, n)
        x[lo:hi, 0::2] = (a @ ct.T) * scale
        x[lo:hi, 1::2] = -(a @ st.T) * scale
    mean = x.mean(axis=0)
    centered = x - mean
    cov = (centered.T @ centered) / replicates
    dev = spectral_norm(cov - 0.5 * np.eye(2 * k))
    ks = np.array(
        [kolmogorov_1d(EmpiricalDistribution(x[:, i]), TARGET.cdf_1d) for i in range(2 * k)]
    )
    corr = cov / np.sqrt(np.outer(np.diag(cov), np.diag(cov)))
    max_cross = 0.0
    for i in range(2 * k):
        for j in range(i + 1, 2 * k):
            if i // 2 != j // 2:  # coordinates of distinct frequencies
                max_cross = max(max_cross, abs(float(corr[i, j])))
    return JointReport(
        nus=ftup.nus,
        n=int(n),
        replicates=int(replicates),
        mean=mean,
        cov=cov,
        cov_deviation=dev,
        coordinate_ks=ks,
        max_cross_corr=max_cross,
    )


def frequency_tuple_sampler(k: int, seed: int) -> FrequencyTuple:
    """k uniform frequencies, resampled on (measure-zero) degeneracies."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = make_stream(seed, derive_stream(rngmod.TUPLES, 0))
    for _ in range(100):
        tup = FrequencyTuple(tuple(rng.uniform(-0.5, 0.5, size=k)))
        if not tup.violations():
            return tup
    raise RuntimeError("frequency sampler exhausted its retry budget")
