import numpy as np
import pytest

from randfourier.coeffmodels import make_model
from randfourier.covariance import spectral_norm
from randfourier.mclab import (
    NON_GAUSSIAN_FLAG,
    ConfigError,
    ExperimentConfig,
    frequency_tuple_sampler,
    joint_gaussianity,
    run_convergence,
)
from randfourier.metrics import TARGET, dkw_sample_size


def small_config(**overrides):
    base = dict(
        model=make_model("rademacher"),
        n_schedule=(16, 256),
        m=150,
        replicates=6,
        metrics=("quadrant", "kolmogorov_re"),
        master_seed=7,
        baseline=True,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


# ---------------------------------------------------------------------------
# Config parsing and validation
# ---------------------------------------------------------------------------

def test_config_roundtrip():
    cfg = small_config()
    again = ExperimentConfig.from_dict(cfg.to_dict())
    assert again == cfg


def test_config_errors_name_fields():
    raw = {
        "model": {"family": "student", "dof": 2.0},
        "n_schedule": [100, 100],
        "m": 0,
        "replicates": 0,
        "metrics": ["mmd", "nope"],
        "mmd_bandwidth": 0.0,
        "baseline": "yes",
        "bogus": 1,
    }
    with pytest.raises(ConfigError) as exc:
        ExperimentConfig.from_dict(raw)
    msg = "\n".join(exc.value.errors)
    assert "n_schedule must be strictly increasing" in msg
    assert "bandwidth must be positive" in msg
    assert "infinite third absolute moment" in msg
    assert "m must be >= 1" in msg
    assert "replicates must be >= 1" in msg
    assert "unknown metric 'nope'" in msg
    assert "master_seed" in msg
    assert "baseline" in msg
    assert "bogus: unknown field" in msg


def test_config_derives_m_from_dkw_target():
    raw = {
        "model": {"family": "gaussian"},
        "n_schedule": [64],
        "replicates": 2,
        "metrics": ["kolmogorov_re"],
        "master_seed": 1,
        "target_epsilon": 0.1,
        "target_delta": 0.1,
    }
    cfg = ExperimentConfig.from_dict(raw)
    # the proof budget: epsilon/2 sampling slack, delta/3 per term
    assert cfg.m == dkw_sample_size(0.05, 0.1 / 3.0)
    raw["m"] = 10
    with pytest.raises(ConfigError, match="DKW-justified minimum"):
        ExperimentConfig.from_dict(raw)
    del raw["m"], raw["target_delta"]
    with pytest.raises(ConfigError, match="give both or neither"):
        ExperimentConfig.from_dict(raw)


# ---------------------------------------------------------------------------
# Convergence runs
# ---------------------------------------------------------------------------

def test_run_deterministic_across_workers():
    cfg = small_config()
    r1 = run_convergence(cfg, workers=1)
    r2 = run_convergence(cfg, workers=2)
    assert r1.rows == r2.rows
    assert r1.summary == r2.summary


def test_run_medians_decrease_at_scale():
    cfg = small_config(
        model=make_model("gaussian"),
        n_schedule=(8, 64, 1024),
        m=400,
        replicates=10,
        metrics=("quadrant",),
        master_seed=1234,
    )
    entry = run_convergence(cfg).summary["metrics"]["quadrant"]
    assert entry["median_inversions"] <= 1
    assert entry["medians"][0] > entry["medians"][-1]
    assert entry["regime_flag"] is None


def test_unit_circle_regime_flagged():
    cfg = small_config(n_schedule=(1,), m=400, replicates=4, metrics=("quadrant",))
    entry = run_convergence(cfg).summary["metrics"]["quadrant"]
    assert entry["regime_flag"] == NON_GAUSSIAN_FLAG
    assert entry["final_median_ratio"] > 2.0


def test_distances_accessor_and_rows_schema():
    cfg = small_config()
    rep = run_convergence(cfg)
    d = rep.distances("quadrant", 16)
    assert d.shape == (cfg.replicates,)
    assert np.all(d >= 0)
    b = rep.distances("quadrant", 16, baseline=True)
    assert b.shape == (cfg.replicates,)
    # one sample row + one baseline row per (n, metric, replicate)
    assert len(rep.rows) == len(cfg.n_schedule) * len(cfg.metrics) * cfg.replicates * 2


def test_epsilon_override_used():
    cfg = small_config(epsilon=0.5)
    entry = run_convergence(cfg).summary["metrics"]["quadrant"]
    assert entry["epsilon"] == 0.5
    assert entry["exceedance"] == 0.0


def test_workers_validation():
    with pytest.raises(ValueError, match="workers"):
        run_convergence(small_config(), workers=0)


# ---------------------------------------------------------------------------
# Joint distribution over a frequency tuple
# ---------------------------------------------------------------------------

def test_joint_gaussianity_small_run():
    rep = joint_gaussianity(make_model("gaussian"), (0.13, 0.31), n=256, replicates=400, seed=3)
    assert rep.cov.shape == (4, 4)
    assert np.max(np.abs(rep.mean)) < 4.0 * np.sqrt(0.5 / 400)
    assert rep.cov_deviation < 0.35
    assert rep.max_cross_corr < 0.25
    d = rep.to_dict()
    assert d["n"] == 256 and len(d["cov"]) == 4


def test_joint_gaussianity_validations():
    with pytest.raises(ValueError, match="degenerate"):
        joint_gaussianity(make_model("gaussian"), (0.2, -0.2), n=64, replicates=200, seed=1)
    with pytest.raises(ValueError, match="replicates must be >= 100"):
        joint_gaussianity(make_model("gaussian"), (0.2,), n=64, replicates=50, seed=1)


def test_joint_cov_deviation_decreases_to_sampling_floor():
    # small phase gap makes the n = 64 deviation visibly large; the floor
    # is what the same estimator shows on true target draws
    tup = (0.1, 0.15)
    reps = 4000
    devs = [
        joint_gaussianity(make_model("rademacher"), tup, n=n, replicates=reps, seed=5).cov_deviation
        for n in (64, 256, 1024)
    ]
    rng = np.random.default_rng(17)
    x = rng.standard_normal((reps, 4)) * TARGET.sigma
    xc = x - x.mean(axis=0)
    floor = spectral_norm((xc.T @ xc) / reps - 0.5 * np.eye(4))
    assert devs[0] > devs[-1]
    assert devs[-1] <= max(2.5 * floor, 0.05)


# ---------------------------------------------------------------------------
# Frequency tuple sampling
# ---------------------------------------------------------------------------

def test_tuple_sampler_deterministic_and_valid():
    t1 = frequency_tuple_sampler(5, seed=2)
    t2 = frequency_tuple_sampler(5, seed=2)
    assert t1 == t2
    assert not t1.violations()
    assert all(abs(nu) <= 0.5 for nu in t1.nus)
    with pytest.raises(ValueError, match="k must be >= 1"):
        frequency_tuple_sampler(0, seed=1)


def test_tuple_sampler_many_calls():
    for seed in range(200):
        assert not frequency_tuple_sampler(3, seed=seed).violations()


def test_degeneracy_is_measure_zero_at_scale():
    # the raw event the sampler guards against: 1e6 tuples of size 3
    rng = np.random.default_rng(123)
    nus = rng.uniform(-0.5, 0.5, size=(10**6, 3))
    zero = np.any(nus == 0.0, axis=1)
    a = np.abs(nus)
    collide = (a[:, 0] == a[:, 1]) | (a[:, 0] == a[:, 2]) | (a[:, 1] == a[:, 2])
    assert not np.any(zero | collide)
