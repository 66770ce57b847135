"""Distribution distances under which empirical laws converge to the truth.

Three families are implemented, each with a one-sample form (empirical vs
the fixed isotropic target) and a two-sample form (empirical vs empirical,
used for the metric-axiom tests):

* Kolmogorov distance on the line: exact sup-norm between CDFs.
* Quadrant sup-distance on the plane: sup over lower-left quadrants, a
  finite-VC set class; evaluated exactly on the corner grid spanned by the
  sample coordinates (plus +inf), with the unreachable remainder bounded
  by the target's modulus of continuity between adjacent corners.
* Gaussian-kernel mean-embedding distance (MMD), with analytic target
  cross and self terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

_ROW_BLOCK = 256
_GRAM_BLOCK = 2048


class EmpiricalDistribution:
    """A finite multiset of points in R^1 or R^2 with exact CDF queries."""

    def __init__(self, points):
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim == 1:
            pass
        elif pts.ndim == 2 and pts.shape[1] in (1, 2):
            if pts.shape[1] == 1:
                pts = pts[:, 0]
        else:
            raise ValueError("points must be (k,), (k,1) or (k,2)")
        if pts.shape[0] < 1:
            raise ValueError("empirical distribution must be non-empty")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points contain non-finite coordinates")
        self.points = pts
        self._sorted = None

    @classmethod
    def from_complex(cls, values) -> "EmpiricalDistribution":
        values = np.asarray(values, dtype=np.complex128)
        return cls(np.column_stack([values.real, values.imag]))

    @property
    def k(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return 1 if self.points.ndim == 1 else 2

    @property
    def sorted_values(self) -> np.ndarray:
        if self.dim != 1:
            raise ValueError("sorted_values is a 1-d query")
        if self._sorted is None:
            self._sorted = np.sort(self.points)
        return self._sorted

    def cdf(self, x) -> float:
        """Exact count-based CDF: (# points <= x coordinatewise) / k."""
        if self.dim == 1:
            return float(np.count_nonzero(self.points <= x)) / self.k
        x = np.asarray(x, dtype=np.float64)
        mask = (self.points[:, 0] <= x[0]) & (self.points[:, 1] <= x[1])
        return float(np.count_nonzero(mask)) / self.k


@dataclass(frozen=True)
class TargetGaussian:
    """The limit law: independent real/imag parts, each N(0, 1/2)."""

    dimension: int = 2
    component_variance: float = 0.5

    @property
    def sigma(self) -> float:
        return math.sqrt(self.component_variance)

    def cdf_1d(self, x):
        return ndtr(np.asarray(x, dtype=np.float64) / self.sigma)

    def quadrant_cdf(self, u, v):
        return self.cdf_1d(u) * self.cdf_1d(v)

    def modulus_cdf(self, r):
        """CDF of |Z|; the squared modulus is Exp(1), so F(r) = 1 - e^(-r^2)."""
        r = np.asarray(r, dtype=np.float64)
        return np.where(r > 0.0, -np.expm1(-np.square(r)), 0.0)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.standard_normal((int(size), 2)) * self.sigma

    def mmd_cross_term(self, pts: np.ndarray, h: float) -> np.ndarray:
        """E_Y kappa(x, Y) for the Gaussian kernel, in closed form."""
        v = self.component_variance
        w = h * h + v
        sq = np.sum(np.square(np.atleast_2d(pts)), axis=1)
        return (h * h / w) * np.exp(-sq / (2.0 * w))

    def mmd_self_term(self, h: float) -> float:
        """E kappa(Y, Y') for independent target draws."""
        return h * h / (h * h + 2.0 * self.component_variance)


TARGET = TargetGaussian()


# ---------------------------------------------------------------------------
# Kolmogorov distance on the line
# ---------------------------------------------------------------------------

def kolmogorov_1d(emp: EmpiricalDistribution, target_cdf) -> float:
    """Exact sup |F_hat - F| for a continuous monotone target CDF.

    Evaluated from both sides of every jump: the sup over the whole line
    is attained at an order statistic, approached from the left or right.
    """
    xs = emp.sorted_values
    k = emp.k
    f = np.asarray(target_cdf(xs), dtype=np.float64)
    hi = np.arange(1, k + 1) / k
    lo = np.arange(0, k) / k
    return float(max(np.max(np.abs(hi - f)), np.max(np.abs(lo - f))))


def kolmogorov_two_sample(emp1: EmpiricalDistribution, emp2: EmpiricalDistribution) -> float:
    """Exact sup |F1 - F2| between two empirical CDFs."""
    x1, x2 = emp1.sorted_values, emp2.sorted_values
    grid = np.concatenate([x1, x2])
    f1 = np.searchsorted(x1, grid, side="right") / emp1.k
    f2 = np.searchsorted(x2, grid, side="right") / emp2.k
    return float(np.max(np.abs(f1 - f2)))


# ---------------------------------------------------------------------------
# Quadrant sup-distance on the plane
# ---------------------------------------------------------------------------

def _corner_grid(pts: np.ndarray):
    ux, ix = np.unique(pts[:, 0], return_inverse=True)
    uy, iy = np.unique(pts[:, 1], return_inverse=True)
    return ux, ix, uy, iy


def _quadrant_scan(ix, iy, kx, ky, weight, scale, px, py):
    """max over the (kx+1) x (ky+1) corner grid (last slot = +inf).

    Accumulated point weights are scaled by `scale` and compared against
    the separable reference outer(px, py) (pass py = None for reference
    zero).  The scan is blocked over x-corners so memory stays
    O(block * ky).
    """
    order = np.argsort(ix, kind="stable")
    ix_s, iy_s = ix[order], iy[order]
    w_s = weight[order]
    starts = np.searchsorted(ix_s, np.arange(kx + 1), side="left")
    starts = np.append(starts, ix_s.size)
    base = np.zeros(ky + 1)
    ref = None if py is None else np.empty((_ROW_BLOCK, ky + 1))
    best = 0.0
    for r0 in range(0, kx + 1, _ROW_BLOCK):
        r1 = min(r0 + _ROW_BLOCK, kx + 1)
        rows = np.zeros((r1 - r0, ky + 1))
        s0, s1 = starts[r0], starts[r1]
        if s1 > s0:
            np.add.at(rows, (ix_s[s0:s1] - r0, iy_s[s0:s1]), w_s[s0:s1])
        np.cumsum(rows, axis=0, out=rows)
        rows += base
        base = rows[-1].copy()
        np.cumsum(rows, axis=1, out=rows)
        if scale != 1.0:
            rows *= scale
        if py is not None:
            buf = ref[: r1 - r0]
            np.multiply(px[r0:r1, None], py[None, :], out=buf)
            rows -= buf
        np.abs(rows, out=rows)
        best = max(best, float(rows.max()))
    return best


def quadrant_sup_with_gap(emp: EmpiricalDistribution, target: TargetGaussian = TARGET):
    """(sup over corner candidates, continuity gap bound).

    The candidate set is the grid of sample coordinates plus +inf in each
    axis; the true sup exceeds the candidate sup by at most the returned
    gap (largest target-CDF increment between adjacent candidates, summed
    over the two axes).
    """
    if emp.dim != 2:
        raise ValueError("quadrant distance needs 2-d points")
    pts = emp.points
    k = emp.k
    ux, ix, uy, iy = _corner_grid(pts)
    px = np.append(target.cdf_1d(ux), 1.0)
    py = np.append(target.cdf_1d(uy), 1.0)
    sup = _quadrant_scan(ix, iy, ux.size, uy.size, np.ones(k), 1.0 / k, px, py)
    gap_x = float(np.max(np.diff(np.concatenate([[0.0], px]))))
    gap_y = float(np.max(np.diff(np.concatenate([[0.0], py]))))
    return sup, gap_x + gap_y


def quadrant_sup(emp: EmpiricalDistribution, target: TargetGaussian = TARGET) -> float:
    """Sup over lower-left quadrants of |empirical - target| mass."""
    return quadrant_sup_with_gap(emp, target)[0]


def quadrant_two_sample(emp1: EmpiricalDistribution, emp2: EmpiricalDistribution) -> float:
    """Exact sup over quadrants of |F1 - F2|; both CDFs are step functions,
    so the corner grid of the pooled coordinates attains the sup."""
    if emp1.dim != 2 or emp2.dim != 2:
        raise ValueError("quadrant distance needs 2-d points")
    pts = np.vstack([emp1.points, emp2.points])
    ux, ix, uy, iy = _corner_grid(pts)
    w = np.concatenate(
        [np.full(emp1.k, 1.0 / emp1.k), np.full(emp2.k, -1.0 / emp2.k)]
    )
    return _quadrant_scan(ix, iy, ux.size, uy.size, w, 1.0, None, None)


# ---------------------------------------------------------------------------
# Kernel mean embedding distance (Gaussian kernel)
# ---------------------------------------------------------------------------

def _gram_block_sum(a, sqa, b, sqb, inv: float) -> float:
    # kappa sum over one block pair; all passes in place
    m = a @ b.T
    m *= 2.0
    m -= sqa[:, None]
    m -= sqb[None, :]
    m *= inv  # now -(|x-y|^2) / (2 h^2) up to rounding
    np.exp(m, out=m)
    return float(m.sum())


def _gram_mean(a: np.ndarray, b: np.ndarray, h: float) -> float:
    """Mean of exp(-|x-y|^2 / (2 h^2)) over all ordered pairs."""
    inv = 1.0 / (2.0 * h * h)
    sqa = np.sum(np.square(a), axis=1)
    sqb = np.sum(np.square(b), axis=1)
    total = 0.0
    for lo in range(0, a.shape[0], _GRAM_BLOCK):
        sel = slice(lo, lo + _GRAM_BLOCK)
        total += _gram_block_sum(a[sel], sqa[sel], b, sqb, inv)
    return total / (a.shape[0] * b.shape[0])


def _gram_mean_sym(a: np.ndarray, h: float) -> float:
    """Self-Gram mean; upper-triangular blocks computed once and doubled."""
    inv = 1.0 / (2.0 * h * h)
    n = a.shape[0]
    sq = np.sum(np.square(a), axis=1)
    total = 0.0
    for i0 in range(0, n, _GRAM_BLOCK):
        i1 = min(i0 + _GRAM_BLOCK, n)
        total += _gram_block_sum(a[i0:i1], sq[i0:i1], a[i0:i1], sq[i0:i1], inv)
        if i1 < n:
            total += 2.0 * _gram_block_sum(a[i0:i1], sq[i0:i1], a[i1:], sq[i1:], inv)
    return total / (n * n)


def _sqrt_clamped(m2: float) -> float:
    if m2 < -1e-12:
        raise ValueError(f"squared embedding distance unexpectedly negative: {m2!r}")
    return math.sqrt(max(m2, 0.0))


def mmd_to_target(
    emp: EmpiricalDistribution, target: TargetGaussian = TARGET, bandwidth: float = 1.0
) -> float:
    """Embedding distance between the empirical law and the target.

    sqrt( mean kappa(x_i, x_j) - 2 mean T(x_i) + T0 ) with the analytic
    target terms; tiny negative radicands (>= -1e-12) clamp to 0.
    """
    h = float(bandwidth)
    if h <= 0.0:
        raise ValueError("bandwidth must be positive")
    if emp.dim != 2:
        raise ValueError("target embedding distance needs 2-d points")
    pts = emp.points
    m2 = (
        _gram_mean_sym(pts, h)
        - 2.0 * float(np.mean(target.mmd_cross_term(pts, h)))
        + target.mmd_self_term(h)
    )
    return _sqrt_clamped(m2)


def _pts2(emp: EmpiricalDistribution) -> np.ndarray:
    return emp.points if emp.dim == 2 else emp.points[:, None]


def mmd_two_sample(
    emp1: EmpiricalDistribution, emp2: EmpiricalDistribution, bandwidth: float = 1.0
) -> float:
    """Embedding distance between two empirical laws (biased/V form, a norm)."""
    h = float(bandwidth)
    if h <= 0.0:
        raise ValueError("bandwidth must be positive")
    a, b = _pts2(emp1), _pts2(emp2)
    if a.shape == b.shape and np.array_equal(a, b):
        return 0.0  # identical multisets embed identically
    m2 = _gram_mean_sym(a, h) + _gram_mean_sym(b, h) - 2.0 * _gram_mean(a, b, h)
    return _sqrt_clamped(m2)


def median_heuristic_bandwidth(emp: EmpiricalDistribution, cap: int = 2048) -> float:
    """Median pairwise distance (first `cap` points), a common bandwidth pick."""
    pts = _pts2(emp)[:cap]
    d2 = (
        np.sum(np.square(pts), axis=1)[:, None]
        + np.sum(np.square(pts), axis=1)[None, :]
        - 2.0 * (pts @ pts.T)
    )
    iu = np.triu_indices(pts.shape[0], k=1)
    med = float(np.median(np.sqrt(np.maximum(d2[iu], 0.0))))
    if med <= 0.0:
        raise ValueError("median pairwise distance is zero; pick a bandwidth explicitly")
    return med


# ---------------------------------------------------------------------------
# DKW sample-size planning
# ---------------------------------------------------------------------------

def dkw_sample_size(epsilon: float, delta: float) -> int:
    """Smallest k with 2 exp(-2 k epsilon^2) <= delta."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    k = max(1, math.ceil(math.log(2.0 / delta) / (2.0 * epsilon * epsilon) - 1e-12))
    while 2.0 * math.exp(-2.0 * k * epsilon * epsilon) > delta:
        k += 1
    return k
