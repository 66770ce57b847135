"""Normalized Fourier sums (1/sqrt(n)) * sum_j a_j exp(-2 pi i nu j).

Numerical contract: the phase of every term comes from the exactly reduced
fractional part of nu*j (see numutil.frac_mul), never from an accumulating
angle or a repeated-power recurrence, so the error stays at the few-ulp
level even for n ~ 2**20.  Accumulation is exact (math.fsum) on the
single-frequency path and blockwise pairwise on the batched path.
"""

from __future__ import annotations

import math

import numpy as np

from .coeffmodels import Realization
from .numutil import frac_mul, frac_outer
from .rng import make_stream

TWO_PI = 2.0 * math.pi

_CHUNK_FREQS = 256


def _coeffs(realization) -> np.ndarray:
    if isinstance(realization, Realization):
        a = realization.coefficients
    else:
        a = np.asarray(realization, dtype=np.float64)
    if a.ndim != 1 or a.size < 1:
        raise ValueError("realization must be a non-empty 1-d coefficient sequence")
    if not np.all(np.isfinite(a)):
        raise ValueError("realization contains non-finite coefficients")
    return a


def _check_nu(nu: float) -> float:
    nu = float(nu)
    if not math.isfinite(nu) or abs(nu) > 0.5:
        raise ValueError(f"frequency must lie in [-1/2, 1/2], got {nu!r}")
    return nu


def _fourier_sum_unchecked(a: np.ndarray, nu: float) -> complex:
    # internal unreduced-frequency entry point (periodicity checks use it)
    n = a.size
    j = np.arange(1, n + 1)
    theta = TWO_PI * frac_mul(nu, j)
    re = math.fsum(a * np.cos(theta))
    im = -math.fsum(a * np.sin(theta))
    scale = 1.0 / math.sqrt(n)
    return complex(re * scale, im * scale)


def fourier_sum(realization, nu: float) -> complex:
    """Evaluate the normalized sum at a single frequency in [-1/2, 1/2]."""
    a = _coeffs(realization)
    return _fourier_sum_unchecked(a, _check_nu(nu))


def fourier_values(realization, nus) -> np.ndarray:
    """Vectorized evaluation at many frequencies.

    Splits the index as j-1 = q*J + s (J a power of two, so nu*J is an
    exact float product) and builds each phase as the product of two
    exactly reduced unit-modulus factors; cost is two real matmuls per
    frequency block instead of per-term trig.
    """
    a = _coeffs(realization)
    nus = np.asarray(nus, dtype=np.float64)
    if nus.ndim != 1:
        raise ValueError("nus must be a 1-d array")
    if nus.size and (not np.all(np.isfinite(nus)) or np.max(np.abs(nus)) > 0.5):
        raise ValueError("frequencies must lie in [-1/2, 1/2]")

    n = a.size
    # block length: power of two near sqrt(n)
    J = 1 << max(1, (n.bit_length() + 1) // 2)
    Q = -(-n // J)
    A = np.zeros((Q, J))
    A.flat[:n] = a
    s_idx = np.arange(J)
    q_idx = np.arange(Q)
    scale = 1.0 / math.sqrt(n)

    out = np.empty(nus.size, dtype=np.complex128)
    for lo in range(0, nus.size, _CHUNK_FREQS):
        sel = slice(lo, min(lo + _CHUNK_FREQS, nus.size))
        chunk = nus[sel]
        th1 = TWO_PI * frac_outer(chunk, s_idx)
        th2 = TWO_PI * frac_outer(chunk * J, q_idx)  # chunk*J exact: J = 2**p
        w1c, w1s = np.cos(th1), np.sin(th1)
        w2c, w2s = np.cos(th2), np.sin(th2)
        mc = w1c @ A.T
        ms = w1s @ A.T
        # sum over q of (w2c - i w2s) * (mc - i ms)
        re = np.sum(w2c * mc - w2s * ms, axis=1)
        im = -np.sum(w2c * ms + w2s * mc, axis=1)
        # shift from index t = j-1 to j: multiply by exp(-2 pi i nu)
        c0, s0 = np.cos(TWO_PI * chunk), np.sin(TWO_PI * chunk)
        out[sel] = ((re * c0 + im * s0) + 1j * (im * c0 - re * s0)) * scale
    return out


def fourier_sum_grid(realization) -> np.ndarray:
    """Values at the discrete frequencies l/n for l = 0..n-1.

    Uses the numpy FFT (mixed-radix/Bluestein, any n) plus the index-shift
    twiddle for the sum starting at j = 1; normalization 1/sqrt(n) makes
    the transform unitary (Parseval holds).
    """
    a = _coeffs(realization)
    n = a.size
    l = np.arange(n)
    theta = TWO_PI * (l / n)
    twiddle = np.cos(theta) - 1j * np.sin(theta)
    return np.fft.fft(a) * twiddle / math.sqrt(n)


def sample_value_cloud(realization, m: int, seed: int, stream_id: int = 0):
    """m uniform frequencies on [-1/2, 1/2] and the sum values there."""
    a = _coeffs(realization)
    if m < 1:
        raise ValueError("m must be >= 1")
    rng = make_stream(seed, stream_id)
    nus = rng.uniform(-0.5, 0.5, size=int(m))
    return nus, fourier_values(a, nus)


def sample_value_distribution(realization, m: int, seed: int, stream_id: int = 0):
    """Empirical distribution of (Re, Im) values at m random frequencies."""
    from .metrics import EmpiricalDistribution

    _, values = sample_value_cloud(realization, m, seed, stream_id)
    return EmpiricalDistribution.from_complex(values)
