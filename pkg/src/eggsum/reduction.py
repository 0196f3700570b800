"""Deterministic compensated summation.

Shell sums must be bit-reproducible for a fixed worker count and agree to
1e-10 relative across worker counts, so every reduction here is Kahan
compensated and combines partial results in a fixed order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

__all__ = ["kahan_sum", "reduce_sum"]

_LANES = 1024


def _kahan_scalar(values) -> float:
    s = 0.0
    c = 0.0
    for v in values:
        y = v - c
        t = s + y
        c = (t - s) - y
        s = t
    return s


def kahan_sum(values) -> float:
    """Compensated sum of a 1-D array, deterministic for a given input.

    Large inputs run Kahan across fixed-width numpy lanes (vectorized down
    the array), then fold the lane accumulators and the tail sequentially.
    """
    a = np.ascontiguousarray(values, dtype=np.float64).ravel()
    n = a.size
    if n == 0:
        return 0.0
    if n < 4 * _LANES:
        return _kahan_scalar(a.tolist())
    rows = n // _LANES
    body = a[: rows * _LANES].reshape(rows, _LANES)
    s = np.zeros(_LANES)
    c = np.zeros(_LANES)
    for r in range(rows):
        y = body[r] - c
        t = s + y
        c = (t - s) - y
        s = t
    return _kahan_scalar(s.tolist() + a[rows * _LANES :].tolist())


def reduce_sum(values, workers: int = 1) -> float:
    """Sum partitioned across ``workers`` contiguous chunks.

    Each chunk is Kahan-summed (in a thread pool when workers > 1) and the
    chunk partials are folded in chunk order, so the result is
    bit-reproducible for a given worker count.
    """
    a = np.ascontiguousarray(values, dtype=np.float64).ravel()
    w = max(1, int(workers))
    if w == 1 or a.size < 2 * w:
        return kahan_sum(a)
    bounds = np.linspace(0, a.size, w + 1).astype(np.int64)
    chunks = [a[bounds[i] : bounds[i + 1]] for i in range(w)]
    with ThreadPoolExecutor(max_workers=w) as pool:
        partials = list(pool.map(kahan_sum, chunks))
    return _kahan_scalar(partials)
