"""Random-coefficient Fourier sums and their Gaussian value statistics.

The package evaluates normalized sums (1/sqrt(n)) sum_j a_j e^(-2 pi i nu j)
for i.i.d. standardized coefficients, computes the exact covariance of the
(Re, Im) vector at frequency tuples together with its half-identity limit,
and measures how far the value distribution at random frequencies sits
from the isotropic complex Gaussian under several distribution distances.
"""

__version__ = "0.1.0"

from .coeffmodels import CoefficientModel, Realization, make_model, sample_coefficients
from .covariance import (
    CovarianceReport,
    FrequencyTuple,
    covariance_exact,
    covariance_limit,
    deviation_bound,
    spectral_norm,
)
from .mclab import (
    ConfigError,
    ConvergenceReport,
    ExperimentConfig,
    JointReport,
    frequency_tuple_sampler,
    joint_gaussianity,
    run_convergence,
)
from .metrics import (
    TARGET,
    EmpiricalDistribution,
    TargetGaussian,
    dkw_sample_size,
    kolmogorov_1d,
    kolmogorov_two_sample,
    median_heuristic_bandwidth,
    mmd_to_target,
    mmd_two_sample,
    quadrant_sup,
    quadrant_sup_with_gap,
    quadrant_two_sample,
)
from .spectral import (
    fourier_sum,
    fourier_sum_grid,
    fourier_values,
    sample_value_cloud,
    sample_value_distribution,
)

__all__ = [
    "__version__",
    "CoefficientModel",
    "Realization",
    "make_model",
    "sample_coefficients",
    "CovarianceReport",
    "FrequencyTuple",
    "covariance_exact",
    "covariance_limit",
    "deviation_bound",
    "spectral_norm",
    "ConfigError",
    "ConvergenceReport",
    "ExperimentConfig",
    "JointReport",
    "frequency_tuple_sampler",
    "joint_gaussianity",
    "run_convergence",
    "TARGET",
    "EmpiricalDistribution",
    "TargetGaussian",
    "dkw_sample_size",
    "kolmogorov_1d",
    "kolmogorov_two_sample",
    "median_heuristic_bandwidth",
    "mmd_to_target",
    "mmd_two_sample",
    "quadrant_sup",
    "quadrant_sup_with_gap",
    "quadrant_two_sample",
    "fourier_sum",
    "fourier_sum_grid",
    "fourier_values",
    "sample_value_cloud",
    "sample_value_distribution",
]
