"""Reproducible random streams.

All sampling goes through a Philox-4x64 counter-based generator keyed by
(seed, stream_id).  Distinct stream ids give statistically independent
streams, so parallel work is reproducible no matter how it is scheduled:
workers never share generator state, they derive their own.

Derived stream ids pack a 16-bit purpose code and a 48-bit index; the
codes below are part of the on-disk reproducibility contract.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# purpose codes for derived streams
COEFFICIENTS = 1
FREQUENCIES = 2
BASELINE = 3
TUPLES = 4


def derive_stream(purpose: int, index: int) -> int:
    """Pack a purpose code and an index into one 64-bit stream id."""
    if not 0 <= purpose < (1 << 16):
        raise ValueError("purpose code out of range")
    if not 0 <= index < (1 << 48):
        raise ValueError("stream index out of range")
    return (purpose << 48) | index


def make_stream(seed: int, stream_id: int = 0) -> np.random.Generator:
    """Generator for (seed, stream_id); bit-reproducible across platforms."""
    key = np.array([seed & _MASK64, stream_id & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
