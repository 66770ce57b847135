"""Exact covariance of the (Re, Im) block vector at a frequency tuple.

For frequencies nu_1..nu_k the 2k x 2k covariance C^(n) of the normalized
sum has entries that are averages (1/n) sum_j of products of cos/sin at
2 pi nu j.  Product-to-sum turns every entry into half-sums of the
geometric averages

    (1/n) sum_{j=1..n} exp(2 pi i theta j)
        = (sin(pi f) / (n sin(pi theta))) * exp(i pi (theta + f)),

with f the exactly reduced fractional part of n*theta, so the closed-form
path is O(k^2) for any n.  A direct compensated O(n k^2) summation is kept
as the second route; the two must agree to 1e-10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numutil import cospi, frac_mul, frac_outer, sinpi, two_sum

_DIRECT_CHUNK = 4096


@dataclass(frozen=True)
class FrequencyTuple:
    """k frequencies in (-1/2, 1/2), nonzero with pairwise distinct |nu|."""

    nus: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "nus", tuple(float(v) for v in self.nus))

    @property
    def k(self) -> int:
        return len(self.nus)

    def violations(self) -> list[str]:
        out = []
        if not self.nus:
            out.append("tuple must contain at least one frequency")
        for i, nu in enumerate(self.nus, start=1):
            if not math.isfinite(nu) or abs(nu) >= 0.5:
                out.append(f"nu_{i} = {nu!r} outside (-1/2, 1/2)")
            elif nu == 0.0:
                out.append(f"nu_{i} = 0")
        for i in range(len(self.nus)):
            for j in range(i + 1, len(self.nus)):
                if abs(self.nus[i]) == abs(self.nus[j]):
                    out.append(f"|nu_{i + 1}| = |nu_{j + 1}|")
        return out

    def validate(self) -> None:
        bad = self.violations()
        if bad:
            raise ValueError("degenerate frequency tuple: " + "; ".join(bad))


@dataclass(frozen=True)
class CovarianceReport:
    """C^(n) for one tuple plus its distance from the 1/2 * identity limit."""

    n: int
    nus: tuple[float, ...]
    c: np.ndarray
    deviation: float
    offdiag_max: float
    bound: float | None
    convergent: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "nus": list(self.nus),
            "c": self.c.tolist(),
            "deviation": self.deviation,
            "offdiag_max": self.offdiag_max,
            "bound": self.bound,
            "convergent": self.convergent,
        }


def _as_tuple(tup) -> FrequencyTuple:
    if isinstance(tup, FrequencyTuple):
        return tup
    return FrequencyTuple(tuple(tup))


def _avg_rotation(theta_hi: float, theta_lo: float, n: int):
    """((1/n) sum_j cos(2 pi theta j), same with sin), theta = hi + lo."""
    theta = theta_hi + theta_lo
    if theta == math.floor(theta):
        return 1.0, 0.0
    f = float(frac_mul(theta_hi, n)) + n * theta_lo
    f = f - math.floor(f)
    amp = sinpi(f) / (n * sinpi(theta))
    ang = theta + f
    return amp * cospi(ang), amp * sinpi(ang)


def _covariance_closed(nus: tuple[float, ...], n: int) -> np.ndarray:
    k = len(nus)
    c = np.empty((2 * k, 2 * k))
    for l in range(k):
        for lp in range(l, k):
            dh, dl = two_sum(nus[l], -nus[lp])
            sh, sl = two_sum(nus[l], nus[lp])
            cd, sd = _avg_rotation(dh, dl, n)
            cs_, ss_ = _avg_rotation(sh, sl, n)
            block = np.array(
                [
                    [0.5 * (cd + cs_), 0.5 * (ss_ - sd)],
                    [0.5 * (ss_ + sd), 0.5 * (cd - cs_)],
                ]
            )
            c[2 * l : 2 * l + 2, 2 * lp : 2 * lp + 2] = block
            if lp != l:
                c[2 * lp : 2 * lp + 2, 2 * l : 2 * l + 2] = block.T
    return c


def _covariance_direct(nus: tuple[float, ...], n: int) -> np.ndarray:
    """O(n k^2) trig summation; Kahan-compensated across chunks."""
    k = len(nus)
    total = np.zeros((2 * k, 2 * k))
    carry = np.zeros_like(total)
    for lo in range(1, n + 1, _DIRECT_CHUNK):
        j = np.arange(lo, min(lo + _DIRECT_CHUNK, n + 1))
        theta = 2.0 * math.pi * frac_outer(nus, j)  # (k, chunk)
        v = np.empty((2 * k, j.size))
        v[0::2] = np.cos(theta)
        v[1::2] = np.sin(theta)
        part = v @ v.T
        y = part - carry
        t = total + y
        carry = (t - total) - y
        total = t
    return total / n


def covariance_limit(tup) -> np.ndarray:
    """The n -> infinity limit: half the identity in 2k dimensions."""
    tup = _as_tuple(tup)
    tup.validate()
    return 0.5 * np.eye(2 * tup.k)


def deviation_bound(tup, n: int) -> float:
    """Upper bound on every entry of |C^(n) - 1/2 I|.

    max over theta in {2 nu_i} and {nu_i +/- nu_j} of 1/(n |sin(pi theta)|),
    from |(1/n) sum_j exp(2 pi i theta j)| = |sin(pi n theta)| / (n |sin(pi theta)|).
    """
    tup = _as_tuple(tup)
    tup.validate()
    if n < 1:
        raise ValueError("n must be >= 1")
    thetas = [2.0 * nu for nu in tup.nus]
    for i in range(tup.k):
        for j in range(i + 1, tup.k):
            thetas.append(tup.nus[i] - tup.nus[j])
            thetas.append(tup.nus[i] + tup.nus[j])
    return max(1.0 / (n * abs(sinpi(t))) for t in thetas)


def covariance_exact(tup, n: int, strict: bool = True, method: str = "closed") -> CovarianceReport:
    """Exact C^(n) for the tuple, by closed-form or direct summation.

    strict=False admits degenerate tuples (e.g. nu = 0) for study; the
    report is then tagged non-convergent and carries no rate bound.
    """
    tup = _as_tuple(tup)
    if n < 1:
        raise ValueError("n must be >= 1")
    if tup.k < 1:
        raise ValueError("tuple must contain at least one frequency")
    violations = tup.violations()
    if strict and violations:
        raise ValueError("degenerate frequency tuple: " + "; ".join(violations))
    for nu in tup.nus:
        if not math.isfinite(nu) or abs(nu) > 0.5:
            raise ValueError(f"frequency {nu!r} outside [-1/2, 1/2]")
    if method == "closed":
        c = _covariance_closed(tup.nus, n)
    elif method == "direct":
        c = _covariance_direct(tup.nus, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    dev = spectral_norm(c - 0.5 * np.eye(2 * tup.k))
    off = c - np.diag(np.diag(c))
    return CovarianceReport(
        n=int(n),
        nus=tup.nus,
        c=c,
        deviation=dev,
        offdiag_max=float(np.max(np.abs(off))) if tup.k else 0.0,
        bound=deviation_bound(tup, n) if not violations else None,
        convergent=not violations,
    )


def spectral_norm(sym: np.ndarray) -> float:
    """Operator norm of a symmetric matrix (largest |eigenvalue|)."""
    return float(np.max(np.abs(np.linalg.eigvalsh(sym))))
