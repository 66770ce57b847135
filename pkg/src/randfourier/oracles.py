"""Slow, independent reference implementations for test certification.

Nothing here shares code with the production paths: the Fourier oracle
runs term-by-term in mpmath extended precision, the embedding-term oracle
integrates by plain Monte Carlo, and the covariance oracle literally
accumulates rotation-matrix products.  Deliberately single-threaded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import mpmath as mp
import numpy as np


@dataclass(frozen=True)
class OracleResult:
    value: Any
    error_estimate: float | None
    method: str


def oracle_fourier_sum(realization, nu: float, dps: int = 40) -> OracleResult:
    """Naive extended-precision evaluation of the normalized sum.

    The error estimate is the difference between forward and reverse
    summation order (both exact to ~10^-dps, so it reflects only the
    float64 input rounding).
    """
    coeffs = getattr(realization, "coefficients", realization)
    a = [float(v) for v in np.asarray(coeffs, dtype=np.float64)]
    n = len(a)
    with mp.workdps(dps):
        terms = [mp.mpf(a[j - 1]) * mp.expjpi(-2 * mp.mpf(nu) * j) for j in range(1, n + 1)]
        fwd = mp.fsum(terms) / mp.sqrt(n)
        rev = mp.fsum(reversed(terms)) / mp.sqrt(n)
        err = float(abs(fwd - rev))
        value = complex(fwd)
    return OracleResult(value=value, error_estimate=err, method="extended-precision sum")


def oracle_mmd_terms(h: float, xs, n_draws: int = 10**6, seed: int = 0) -> OracleResult:
    """Monte Carlo estimates of the embedding cross term T(x) and self term T0.

    Draws from the isotropic target (independent N(0, 1/2) components) with
    numpy's default PCG64 generator, which is unrelated to the production
    Philox streams.  Returns ((t_values, t_stderrs), (t0, t0_stderr)).
    """
    if h <= 0.0:
        raise ValueError("bandwidth must be positive")
    if n_draws < 2:
        raise ValueError("need at least 2 draws")
    rng = np.random.default_rng(seed)
    sigma = math.sqrt(0.5)
    y1 = rng.standard_normal((n_draws, 2)) * sigma
    y2 = rng.standard_normal((n_draws, 2)) * sigma
    inv = 1.0 / (2.0 * h * h)

    kyy = np.exp(-np.sum(np.square(y1 - y2), axis=1) * inv)
    t0 = float(np.mean(kyy))
    t0_err = float(np.std(kyy, ddof=1) / math.sqrt(n_draws))

    xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
    t_vals = np.empty(xs.shape[0])
    t_errs = np.empty(xs.shape[0])
    for i, x in enumerate(xs):
        kxy = np.exp(-np.sum(np.square(y1 - x), axis=1) * inv)
        t_vals[i] = float(np.mean(kxy))
        t_errs[i] = float(np.std(kxy, ddof=1) / math.sqrt(n_draws))
    return OracleResult(
        value=((t_vals, t_errs), (t0, t0_err)),
        error_estimate=float(max(t0_err, float(np.max(t_errs)))),
        method="Monte Carlo integration",
    )


def oracle_covariance(nus, n: int) -> OracleResult:
    """Literal average of D^j C0 D^-j over j = 1..n.

    Builds every rotation block explicitly from its angle; C0 is the block
    matrix with c c^T in every block, c = (1, 0)^T.
    """
    nus = [float(v) for v in nus]
    if n < 1 or n > 10**5:
        raise ValueError("oracle covariance is restricted to 1 <= n <= 1e5")
    k = len(nus)
    cct = np.array([[1.0, 0.0], [0.0, 0.0]])
    c0 = np.kron(np.ones((k, k)), cct)
    acc = np.zeros((2 * k, 2 * k))
    for j in range(1, n + 1):
        d = np.zeros((2 * k, 2 * k))
        dinv = np.zeros((2 * k, 2 * k))
        for l, nu in enumerate(nus):
            ang = 2.0 * math.pi * nu * j
            ca, sa = math.cos(ang), math.sin(ang)
            d[2 * l : 2 * l + 2, 2 * l : 2 * l + 2] = [[ca, -sa], [sa, ca]]
            dinv[2 * l : 2 * l + 2, 2 * l : 2 * l + 2] = [[ca, sa], [-sa, ca]]
        acc += d @ c0 @ dinv
    return OracleResult(value=acc / n, error_estimate=None, method="exhaustive trig sum")
