"""Low-level float helpers: exact phase reduction and trig on the unit lattice.

Phases of the form x*j (j integer) are reduced modulo 1 *before* any trig
call.  The product is split into an exact high part and a tiny low part
(Veltkamp splitting), each reduced with fmod (exact for float64), so no
accumulating-angle drift enters even at j ~ 2**20.
"""

from __future__ import annotations

import math

import numpy as np

_SPLIT = 134217729.0  # 2**27 + 1
_J_MAX = 1 << 26  # high-part product stays exact below this


def split(x: float):
    """Veltkamp split: x == hi + lo with hi carrying the top 26 bits."""
    t = _SPLIT * x
    hi = t - (t - x)
    return hi, x - hi


def two_sum(a: float, b: float):
    """a + b as (rounded sum, exact residual)."""
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def frac_mul(x: float, j) -> np.ndarray:
    """Fractional part of x*j in [0, 1), without rounding x*j first.

    j may be scalar or array; |j| must stay below 2**26.
    """
    j = np.asarray(j, dtype=np.float64)
    if np.any(np.abs(j) >= _J_MAX):
        raise ValueError("index exceeds exact-product range (2**26)")
    hi, lo = split(float(x))
    f = np.fmod(hi * j, 1.0) + np.fmod(lo * j, 1.0)
    f = np.fmod(f, 1.0)
    return np.where(f < 0.0, f + 1.0, f)


def frac_outer(xs, j) -> np.ndarray:
    """frac_mul broadcast over a vector of multipliers: out[i, t] = frac(xs[i]*j[t])."""
    xs = np.asarray(xs, dtype=np.float64)[:, None]
    j = np.asarray(j, dtype=np.float64)[None, :]
    if np.any(np.abs(j) >= _J_MAX):
        raise ValueError("index exceeds exact-product range (2**26)")
    t = _SPLIT * xs
    hi = t - (t - xs)
    lo = xs - hi
    f = np.fmod(hi * j, 1.0) + np.fmod(lo * j, 1.0)
    f = np.fmod(f, 1.0)
    f[f < 0.0] += 1.0
    return f


def sinpi(x: float) -> float:
    """sin(pi*x), exact zeros on the integer lattice."""
    x = float(x)
    n = math.floor(x + 0.5)
    r = x - n
    s = math.sin(math.pi * r)
    return -s if (n & 1) else s


def cospi(x: float) -> float:
    """cos(pi*x), exact zeros at half-integers."""
    x = float(x)
    n = math.floor(x + 0.5)
    r = x - n
    c = 0.0 if r == -0.5 else math.cos(math.pi * r)
    return -c if (n & 1) else c
