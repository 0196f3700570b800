"""Enumeration of multi-index shells: all i in N^d with |i| = n.

Shells are the natural unit of the tail analysis (the series under study
are organized by total degree), so enumeration is by shell, vectorized,
and deterministic: rows are produced in lexicographic order.
"""

from __future__ import annotations

from math import comb

import numpy as np

from .errors import ValidationError

__all__ = ["shell_count", "cumulative_count", "shell_indices"]


def shell_count(d: int, n: int) -> int:
    """Number of d-tuples of nonnegative integers summing to n."""
    return comb(n + d - 1, d - 1)


def cumulative_count(d: int, n_max: int) -> int:
    """Number of d-tuples with total degree <= n_max."""
    return comb(n_max + d, d)


def shell_indices(d: int, n: int) -> np.ndarray:
    """All multi-indices of total degree n in d variables, shape (count, d).

    int32 entries; lexicographic row order.
    """
    if d < 1:
        raise ValidationError("dimension must be >= 1")
    if n < 0:
        raise ValidationError("total degree must be >= 0")
    if d == 1:
        return np.array([[n]], dtype=np.int32)
    if d == 2:
        c0 = np.arange(n + 1, dtype=np.int32)
        return np.column_stack([c0, n - c0])
    if d == 3:
        sizes = np.arange(n + 1, 0, -1, dtype=np.int64)
        c0 = np.repeat(np.arange(n + 1, dtype=np.int32), sizes)
        starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
        c1 = (np.arange(sizes.sum(), dtype=np.int64) - starts[c0]).astype(np.int32)
        return np.column_stack([c0, c1, (n - c0 - c1).astype(np.int32)])
    parts = []
    for j in range(n + 1):
        rest = shell_indices(d - 1, n - j)
        head = np.full((rest.shape[0], 1), j, dtype=np.int32)
        parts.append(np.hstack([head, rest]))
    return np.vstack(parts)
