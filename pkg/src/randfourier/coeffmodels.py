"""Coefficient distributions for the random Fourier sums.

Every model is standardized to mean 0 and variance 1 at construction and
must have a finite third absolute moment; Student-t is therefore only
admitted for dof > 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rng import make_stream

FAMILIES = ("rademacher", "uniform", "gaussian", "exponential", "student")

# fourth moments of the standardized laws (None = infinite)
_FOURTH = {
    "rademacher": 1.0,
    "uniform": 1.8,  # 144 * E[U(-1/2,1/2)^4] = 144/80
    "gaussian": 3.0,
    "exponential": 9.0,
}


@dataclass(frozen=True)
class CoefficientModel:
    """A zero-mean, unit-variance coefficient law."""

    family: str
    dof: float | None = None
    standardized: bool = field(default=True, init=False)

    @property
    def label(self) -> str:
        if self.family == "student":
            return f"student(dof={self.dof:g})"
        return self.family

    @property
    def fourth_moment(self) -> float | None:
        """Fourth moment of the standardized law; None when infinite."""
        if self.family == "student":
            if self.dof is None or self.dof <= 4:
                return None
            return 3.0 + 6.0 / (self.dof - 4.0)
        return _FOURTH[self.family]

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """n standardized i.i.d. draws from the given generator."""
        if self.family == "rademacher":
            return 2.0 * rng.integers(0, 2, size=n).astype(np.float64) - 1.0
        if self.family == "uniform":
            # raw U(-1/2, 1/2) has variance 1/12
            return rng.uniform(-0.5, 0.5, size=n) * math.sqrt(12.0)
        if self.family == "gaussian":
            return rng.standard_normal(n)
        if self.family == "exponential":
            # Exp(1) shifted to mean 0; variance already 1
            return rng.standard_exponential(n) - 1.0
        if self.family == "student":
            scale = math.sqrt((self.dof - 2.0) / self.dof)
            return rng.standard_t(self.dof, size=n) * scale
        raise AssertionError(f"unreachable family {self.family!r}")


@dataclass(frozen=True)
class Realization:
    """One drawn coefficient sequence plus the seeds that regenerate it."""

    coefficients: np.ndarray
    model_id: str
    seed_path: tuple[int, int]

    def __post_init__(self):
        if self.coefficients.size < 1:
            raise ValueError("realization must contain at least one coefficient")
        if not np.all(np.isfinite(self.coefficients)):
            raise ValueError("realization contains non-finite coefficients")

    def __len__(self) -> int:
        return self.coefficients.size


def make_model(family: str, dof: float | None = None) -> CoefficientModel:
    """Build a standardized coefficient model.

    Student-t needs dof > 3 (finite third absolute moment); the other
    families take no parameters.
    """
    family = family.lower()
    if family not in FAMILIES:
        raise ValueError(f"unknown coefficient family: {family!r}")
    if family == "student":
        if dof is None:
            raise ValueError("student family requires dof")
        dof = float(dof)
        if not math.isfinite(dof) or dof <= 3.0:
            raise ValueError(
                f"student with dof={dof:g} rejected: infinite third absolute moment"
            )
        return CoefficientModel(family, dof)
    if dof is not None:
        raise ValueError(f"family {family!r} takes no dof parameter")
    return CoefficientModel(family)


def sample_coefficients(
    model: CoefficientModel, n: int, seed: int, stream_id: int = 0
) -> Realization:
    """n i.i.d. standardized draws; identical output for identical arguments."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = make_stream(seed, stream_id)
    coeffs = model.draw(rng, int(n))
    return Realization(coeffs, model.label, (int(seed), int(stream_id)))
