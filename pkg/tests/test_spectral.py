import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randfourier.coeffmodels import make_model, sample_coefficients
from randfourier.oracles import oracle_fourier_sum
from randfourier.spectral import (
    _fourier_sum_unchecked,
    fourier_sum,
    fourier_sum_grid,
    fourier_values,
    sample_value_cloud,
    sample_value_distribution,
)


def test_single_term_analytic():
    got = fourier_sum([1.0], 0.3)
    want = complex(math.cos(0.6 * math.pi), -math.sin(0.6 * math.pi))
    assert abs(got - want) < 1e-15
    assert got == pytest.approx(complex(-0.309017, -0.951057), abs=1e-6)


@pytest.mark.parametrize("n", [1, 5, 64, 1000])
def test_all_ones_zero_frequency(n):
    got = fourier_sum(np.ones(n), 0.0)
    assert got == pytest.approx(complex(math.sqrt(n), 0.0), abs=1e-12)


def test_rademacher_4096_vs_extended_precision_oracle():
    real = sample_coefficients(make_model("rademacher"), 4096, seed=1)
    got = fourier_sum(real, 0.137)
    ref = oracle_fourier_sum(real, 0.137)
    scale = np.sum(np.abs(real.coefficients)) / math.sqrt(4096)
    assert abs(got - ref.value) <= 1e-10 * scale


def test_large_n_error_budget():
    # contract: absolute error <= 1e-10 * (1/sqrt(n)) * sum |a_j|
    n = 2**20
    real = sample_coefficients(make_model("gaussian"), n, seed=5)
    nu = 0.2718281828
    got = fourier_sum(real, nu)
    ref = oracle_fourier_sum(real, nu)
    budget = 1e-10 * np.sum(np.abs(real.coefficients)) / math.sqrt(n)
    assert abs(got - ref.value) <= budget


def test_batched_matches_single():
    real = sample_coefficients(make_model("gaussian"), 1537, seed=2)
    rng = np.random.default_rng(0)
    nus = np.concatenate([rng.uniform(-0.5, 0.5, 40), [-0.5, 0.0, 0.5]])
    batch = fourier_values(real, nus)
    for nu, v in zip(nus, batch):
        assert abs(v - fourier_sum(real, nu)) < 1e-12


def test_grid_impulse():
    grid = fourier_sum_grid([1.0, 0.0, 0.0, 0.0])
    for l, v in enumerate(grid):
        want = 0.5 * complex(math.cos(2 * math.pi * l / 4), -math.sin(2 * math.pi * l / 4))
        assert abs(v - want) < 1e-15


@pytest.mark.parametrize("n", [2, 3, 4, 64, 1000, 4096])
def test_parseval_identity(n):
    a = sample_coefficients(make_model("gaussian"), n, seed=n).coefficients
    grid = fourier_sum_grid(a)
    lhs = np.sum(np.abs(grid) ** 2)
    rhs = np.sum(a * a)
    assert abs(lhs - rhs) <= 1e-9 * rhs


@pytest.mark.parametrize("n", [64, 1000, 4096])
def test_grid_matches_pointwise(n):
    a = sample_coefficients(make_model("gaussian"), n, seed=10 + n).coefficients
    grid = fourier_sum_grid(a)
    scale = np.max(np.abs(grid))
    for l in range(n):
        # map the grid frequency into [-1/2, 1/2]; phases agree exactly
        nu = l / n if l / n <= 0.5 else l / n - 1.0
        assert abs(grid[l] - fourier_sum(a, nu)) <= 1e-9 * scale


def test_grid_random_1024_cross_path():
    a = sample_coefficients(make_model("gaussian"), 1024, seed=77).coefficients
    grid = fourier_sum_grid(a)
    scale = np.max(np.abs(grid))
    direct = fourier_values(a, np.array([l / 1024 if l <= 512 else l / 1024 - 1.0 for l in range(1024)]))
    assert np.max(np.abs(grid - direct)) <= 1e-9 * scale


def test_conjugate_symmetry():
    a = sample_coefficients(make_model("uniform"), 333, seed=4).coefficients
    for nu in (0.1, 0.245, 0.4999, 0.5):
        assert abs(fourier_sum(a, -nu) - fourier_sum(a, nu).conjugate()) < 1e-12


def test_periodicity_internal_api():
    a = sample_coefficients(make_model("gaussian"), 257, seed=6).coefficients
    for nu in (0.113, -0.377, 0.25):
        v1 = _fourier_sum_unchecked(a, nu)
        v2 = _fourier_sum_unchecked(a, nu + 1.0)
        assert abs(v1 - v2) < 1e-12


def test_linearity():
    rng = np.random.default_rng(9)
    a = rng.standard_normal(500)
    b = rng.standard_normal(500)
    alpha, beta = 1.7, -0.3
    for nu in (0.05, 0.321, -0.4):
        lhs = fourier_sum(alpha * a + beta * b, nu)
        rhs = alpha * fourier_sum(a, nu) + beta * fourier_sum(b, nu)
        scale = (abs(alpha) * np.sum(np.abs(a)) + abs(beta) * np.sum(np.abs(b))) / math.sqrt(500)
        assert abs(lhs - rhs) <= 1e-10 * scale


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=300),
    nu=st.floats(min_value=-0.5, max_value=0.5),
    seed=st.integers(min_value=0, max_value=2**20),
)
def test_conjugate_symmetry_property(n, nu, seed):
    a = np.random.default_rng(seed).standard_normal(n)
    assert abs(fourier_sum(a, -nu) - fourier_sum(a, nu).conjugate()) < 1e-12


def test_validation_errors():
    with pytest.raises(ValueError, match="non-empty"):
        fourier_sum([], 0.1)
    with pytest.raises(ValueError, match="non-finite"):
        fourier_sum([1.0, np.inf], 0.1)
    with pytest.raises(ValueError, match=r"\[-1/2, 1/2\]"):
        fourier_sum([1.0], 0.51)
    with pytest.raises(ValueError, match=r"\[-1/2, 1/2\]"):
        fourier_values([1.0], np.array([0.7]))
    # endpoints are allowed
    fourier_sum([1.0, -1.0], 0.5)
    fourier_sum([1.0, -1.0], -0.5)


def test_value_cloud_zero_signal():
    _, values = sample_value_cloud(np.zeros(32), 50, seed=1)
    assert np.all(values == 0)


def test_value_cloud_unit_circle():
    nus, values = sample_value_cloud([1.0], 2000, seed=3)
    assert np.all(np.abs(nus) <= 0.5)
    assert abs(np.mean(np.abs(values)) - 1.0) < 1e-14


def test_value_cloud_determinism_and_m_validation():
    a = sample_coefficients(make_model("rademacher"), 64, seed=2)
    n1, v1 = sample_value_cloud(a, 100, seed=5, stream_id=3)
    n2, v2 = sample_value_cloud(a, 100, seed=5, stream_id=3)
    assert np.array_equal(n1, n2) and np.array_equal(v1, v2)
    with pytest.raises(ValueError, match="m must be >= 1"):
        sample_value_cloud(a, 0, seed=5)


def test_sample_value_distribution_shape():
    a = sample_coefficients(make_model("gaussian"), 128, seed=8)
    emp = sample_value_distribution(a, 200, seed=9)
    assert emp.dim == 2 and emp.k == 200
