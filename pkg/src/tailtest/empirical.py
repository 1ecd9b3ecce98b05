"""Order-statistic extraction and the sample version of the tail proxy.

A sorted sample split plays the role of an empirical quantile table:
the value at fractional rank q is the order statistic with index
round(q * (n+1)), which concentrates near Q(q).  The two-granularity
statistic takes its four order statistics from four independent splits
so the terms are independent; the single-granularity (weak) variant
reads three coarse bucket endpoints from one split.

A bucket whose length difference comes out non-positive carries no
curvature signal; the statistic maps it to ``math.inf``, which the
tester reads as light evidence at that bucket rather than an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SortedSampleSplit",
    "DEGENERATE",
    "is_degenerate",
    "rank_index",
    "order_statistic_at",
    "two_scale_statistic",
    "single_scale_statistic",
]

DEGENERATE = math.inf


def is_degenerate(s: float) -> bool:
    """True for the marker produced by a non-positive bucket difference."""
    return not math.isfinite(s)


@dataclass(frozen=True)
class SortedSampleSplit:
    """An ascending array of nonnegative samples."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise ValueError("values must be a one-dimensional array with n >= 1")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must all be finite")
        if values[0] < 0.0:
            raise ValueError("values must be nonnegative")
        if np.any(np.diff(values) < 0.0):
            raise ValueError("values must be sorted ascending")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "SortedSampleSplit":
        """Sort a copy of raw samples (stable, though only values matter)."""
        arr = np.asarray(samples, dtype=float)
        return cls(values=np.sort(arr, kind="stable"))


def rank_index(n: int, q: float) -> int:
    """1-based order-statistic index for fractional rank q in (0, 1).

    round(q * (n+1)) with half rounded away from zero, clamped to
    [1, n]; the (n+1) centering matches where order statistics
    concentrate.
    """
    if not (0.0 < q < 1.0):
        raise ValueError("fractional rank must lie in (0, 1)")
    idx = int(math.floor(q * (n + 1) + 0.5))
    return min(max(idx, 1), n)


def order_statistic_at(split: SortedSampleSplit, q: float) -> float:
    """Sample value at fractional rank q."""
    return float(split.values[rank_index(split.n, q) - 1])


def _endpoint(split: SortedSampleSplit, q: float) -> tuple[float, float]:
    """Order statistic plus its realized rank fraction idx/(n+1)."""
    idx = rank_index(split.n, q)
    return float(split.values[idx - 1]), idx / (split.n + 1)


def two_scale_statistic(splits, i: int, k: int) -> float:
    """Four-split bucket statistic at coarse bucket i of k.

    The numerator is the fine-bucket length at mass i/k (width 1/k^2),
    the denominator k times the difference against the matching fine
    bucket one coarse step up; each of the four order statistics comes
    from its own split.  Returns DEGENERATE when either length or the
    difference is non-positive.
    """
    s, ranks = two_scale_statistic_with_ranks(splits, i, k)
    return s


def two_scale_statistic_with_ranks(splits, i: int, k: int):
    """Statistic plus the four realized rank fractions (a, b, c, d).

    Rank fractions are what the index rounding actually landed on; the
    tester evaluates its reference curve at exactly these masses.
    """
    if len(splits) != 4:
        raise ValueError("exactly four splits are required")
    if k < 4:
        raise ValueError("k must be >= 4")
    if not (2 <= i <= k - 2):
        raise ValueError(f"bucket index {i} outside [2, {k - 2}]")
    n = splits[0].n
    if any(s.n != n for s in splits):
        raise ValueError("all four splits must hold the same number of samples")
    if n < k * k:
        raise ValueError(f"need at least k^2 = {k * k} samples per split, got {n}")

    k2 = k * k
    upper, q_a = _endpoint(splits[0], (i * k + 1) / k2)
    lower, q_b = _endpoint(splits[1], i / k)
    upper_d, q_c = _endpoint(splits[2], ((i + 1) * k + 1) / k2)
    lower_d, q_d = _endpoint(splits[3], (i + 1) / k)

    length = upper - lower
    diff = (upper_d - lower_d) - length
    ranks = (q_a, q_b, q_c, q_d)
    if diff <= 0.0 or length <= 0.0:
        return DEGENERATE, ranks
    return length / (k * diff), ranks


def single_scale_statistic(split: SortedSampleSplit, i: int, k: int) -> float:
    """Single-split bucket statistic from coarse buckets only.

    With bucket endpoints I[j] at masses j/k, lengths L[j] = I[j+1]-I[j]
    and their forward difference, the statistic is
    L[i] / (k * (L[i+1] - L[i])); on perfect exponential quantiles this
    sits near 1 - i/k.  Coarser than the four-split form (error O(1/k)
    instead of O(1/k^2) in the length scale) but needs only n >= k.
    """
    s, ranks = single_scale_statistic_with_ranks(split, i, k)
    return s


def single_scale_statistic_with_ranks(split: SortedSampleSplit, i: int, k: int):
    """Statistic plus the three realized rank fractions."""
    if k < 4:
        raise ValueError("k must be >= 4")
    if not (1 <= i <= k - 3):
        raise ValueError(f"bucket index {i} outside [1, {k - 3}]")
    if split.n < k:
        raise ValueError(f"need at least k = {k} samples, got {split.n}")

    e0, q0 = _endpoint(split, i / k)
    e1, q1 = _endpoint(split, (i + 1) / k)
    e2, q2 = _endpoint(split, (i + 2) / k)

    length = e1 - e0
    diff = (e2 - e1) - length
    ranks = (q0, q1, q2)
    if diff <= 0.0 or length <= 0.0:
        return DEGENERATE, ranks
    return length / (k * diff), ranks
