"""End-to-end heavy/light decision procedures and budget calculators.

A distribution is declared HEAVY when the bucket statistic falls below
the decision boundary at any scanned bucket, LIGHT otherwise.

The boundary at bucket i is built from two pieces:

* a *reference curve*: the value the unit exponential - the boundary
  case between the two classes - would produce for the same estimator
  at the same realized ranks.  It converges to the asymptotic threshold
  1 - i/k as k grows but, unlike 1 - i/k, is exact at finite k, where
  both estimators sit a systematic O(1/k) below their limits;

* a safety margin: half the separation gap from the smoothness bounds,
  or the statistic's standard error under the exponential null scaled
  by ``noise_sigmas``, whichever is larger.  The standard error has a
  closed form in the rank fractions alone, so boundaries are
  deterministic given (n, k) and invariant to scaling of the data.

``noise_sigmas`` defaults to 4.0, an empirically fixed working
constant; the asymptotic theory leaves all such constants free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .distributions import TailParams, WellBehavedBounds
from .empirical import (
    SortedSampleSplit,
    is_degenerate,
    single_scale_statistic_with_ranks,
    two_scale_statistic_with_ranks,
)
from .proxy import threshold_and_gap

__all__ = [
    "Variant",
    "Verdict",
    "TestConfig",
    "BucketRecord",
    "TestOutcome",
    "required_buckets",
    "required_samples",
    "run_full_test",
    "run_weak_test",
]


class Variant(Enum):
    FULL = "full"
    WEAK = "weak"


class Verdict(Enum):
    HEAVY = "heavy"
    LIGHT = "light"


@dataclass(frozen=True)
class TestConfig:
    """Everything the decision procedure needs besides the samples.

    ``constants`` are the (c_k, c_n) multipliers for the bucket/sample
    calculators; ``gap_denominator`` overrides the default beta^3 * b1
    in the gap; ``noise_sigmas`` scales the per-bucket noise floor.
    """

    __test__ = False  # keep pytest from collecting this as a test class

    tail: TailParams
    bounds: WellBehavedBounds
    k: int
    variant: Variant = Variant.FULL
    weak_range: tuple[float, float] = (0.1, 0.8)
    constants: tuple[float, float] = (1.0, 1.0)
    noise_sigmas: float = 4.0
    gap_denominator: float | None = None

    def __post_init__(self):
        if self.k < 4:
            raise ValueError("k must be >= 4")
        if self.k + 1e-9 < 4.0 / self.tail.rho:
            raise ValueError(
                f"k={self.k} too coarse for rho={self.tail.rho}: need k >= 4/rho"
            )
        if self.bounds.zeta > 1.0 / (2 * self.k) + 1e-12:
            raise ValueError(
                f"bounds hold only up to mass {1 - self.bounds.zeta}; "
                f"k={self.k} requires zeta <= 1/(2k)"
            )
        c1, c2 = self.weak_range
        if not (0.0 < c1 < c2 < 1.0):
            raise ValueError("weak_range must satisfy 0 < c1 < c2 < 1")
        if not self.noise_sigmas >= 0.0:
            raise ValueError("noise_sigmas must be >= 0")
        if self.gap_denominator is not None and not self.gap_denominator > 0.0:
            raise ValueError("gap_denominator must be > 0")


@dataclass(frozen=True)
class BucketRecord:
    i: int
    s_hat: float
    boundary: float
    margin: float
    degenerate: bool


@dataclass(frozen=True)
class TestOutcome:
    __test__ = False  # keep pytest from collecting this as a test class

    verdict: Verdict
    records: tuple[BucketRecord, ...]
    k: int
    n: int
    seed: int | None
    config: TestConfig = field(repr=False)


# ---------------------------------------------------------------------------
# budget calculators
# ---------------------------------------------------------------------------

def required_buckets(tail: TailParams, bounds: WellBehavedBounds,
                     c_k: float = 1.0) -> int:
    """Coarse bucket count: max of the smoothness and mass-resolution terms.

    ceil(max(c_k * b2 * beta^4 * (2*b1 + b2) / alpha, 4/rho)), at
    least 4.
    """
    if not tail.alpha > 0.0:
        raise ValueError("alpha must be > 0 for the bucket calculator")
    if not c_k > 0.0:
        raise ValueError("c_k must be > 0")
    smooth = c_k * bounds.b2 * bounds.beta ** 4 * (2.0 * bounds.b1 + bounds.b2) / tail.alpha
    k = math.ceil(max(smooth, 4.0 / tail.rho))
    return max(k, 4)


def required_samples(k: int, tail: TailParams, bounds: WellBehavedBounds,
                     c_n: float = 1.0) -> int:
    """Per-split sample count c_n * k^3 * ln(k) * b1^(3/2) * beta^2 / alpha.

    Rounded up with one extra sample so the bound is strictly exceeded,
    then clamped to at least k^2 (the statistic needs a sample per fine
    bucket).
    """
    if k < 4:
        raise ValueError("k must be >= 4")
    if not tail.alpha > 0.0:
        raise ValueError("alpha must be > 0 for the sample calculator")
    if not c_n > 0.0:
        raise ValueError("c_n must be > 0")
    raw = c_n * k ** 3 * math.log(k) * bounds.b1 ** 1.5 * bounds.beta ** 2 / tail.alpha
    return max(math.ceil(raw) + 1, k * k)


# ---------------------------------------------------------------------------
# reference curve and noise floor
# ---------------------------------------------------------------------------

def _exp_quantile(q: float) -> float:
    return -math.log1p(-q)


def _reference_two_scale(ranks, k: int) -> float:
    """Unit-exponential value of the four-split statistic at these ranks."""
    q_a, q_b, q_c, q_d = ranks
    num = _exp_quantile(q_a) - _exp_quantile(q_b)
    den = (_exp_quantile(q_c) - _exp_quantile(q_d)) - num
    return num / (k * den)


def _reference_single_scale(ranks, k: int) -> float:
    q0, q1, q2 = ranks
    length = _exp_quantile(q1) - _exp_quantile(q0)
    diff = (_exp_quantile(q2) - _exp_quantile(q1)) - length
    return length / (k * diff)


def _null_se_two_scale(ranks, k: int, n: int, reference: float) -> float:
    """Std. error of the four-split statistic under the exponential null.

    First-order delta method on four independent order statistics whose
    variances are q(1-q)/(n f^2); the local densities cancel against
    the statistic's own length scales, leaving a function of the rank
    fractions q and the reference value alone:
    ref * (1 + k*ref) * sqrt(k^4/n * sum q(1-q)).
    """
    kt = k * reference
    w_sum = sum(q * (1.0 - q) for q in ranks) * float(k) ** 4 / n
    return abs(reference) * (1.0 + kt) * math.sqrt(w_sum)


def _null_se_single_scale(k: int, n: int, reference: float) -> float:
    """Std. error of the single-split statistic under the exponential null.

    Spacings of order statistics from one sample are positively
    correlated; accounting for the covariances, the relative variance
    collapses to (1 - 1/k + 2*k*ref + 2*(k*ref)^2) * k/n.
    """
    kt = k * reference
    rel2 = (1.0 - 1.0 / k + 2.0 * kt + 2.0 * kt * kt) * k / n
    return abs(reference) * math.sqrt(rel2)


def _boundary(config: TestConfig, z: float, reference: float, se: float) -> float:
    tg = threshold_and_gap(z, config.tail, config.bounds, config.gap_denominator)
    return reference - max(tg.gap / 2.0, config.noise_sigmas * se)


def _record(i: int, s_hat: float, boundary: float) -> BucketRecord:
    degenerate = is_degenerate(s_hat)
    margin = math.inf if degenerate else s_hat - boundary
    return BucketRecord(i=i, s_hat=s_hat, boundary=boundary,
                        margin=margin, degenerate=degenerate)


def _verdict(records) -> Verdict:
    for r in records:
        if not r.degenerate and r.s_hat < r.boundary:
            return Verdict.HEAVY
    return Verdict.LIGHT


# ---------------------------------------------------------------------------
# decision procedures
# ---------------------------------------------------------------------------

def run_full_test(splits, config: TestConfig, seed: int | None = None) -> TestOutcome:
    """Four-split test over coarse buckets 2..k-2.

    Degenerate buckets count as above the boundary (extreme light
    evidence) and can never produce a HEAVY verdict on their own.
    """
    if config.variant is not Variant.FULL:
        raise ValueError("config.variant must be FULL for run_full_test")
    splits = list(splits)
    k = config.k
    records = []
    for i in range(2, k - 1):
        s_hat, ranks = two_scale_statistic_with_ranks(splits, i, k)
        reference = _reference_two_scale(ranks, k)
        se = _null_se_two_scale(ranks, k, splits[0].n, reference)
        records.append(_record(i, s_hat, _boundary(config, i / k, reference, se)))
    records = tuple(records)
    return TestOutcome(verdict=_verdict(records), records=records,
                       k=k, n=splits[0].n, seed=seed, config=config)


def weak_scan_range(config: TestConfig) -> range:
    """Bucket indices scanned by the weak test: [ceil(c1*k), floor(c2*k)],
    clipped to the statistic's valid range [1, k-3]."""
    c1, c2 = config.weak_range
    k = config.k
    lo = max(math.ceil(c1 * k), 1)
    hi = min(math.floor(c2 * k), k - 3)
    if lo > hi:
        raise ValueError(f"weak range {config.weak_range} scans no bucket at k={k}")
    return range(lo, hi + 1)


def run_weak_test(split: SortedSampleSplit, config: TestConfig,
                  seed: int | None = None) -> TestOutcome:
    """Single-split test scanning the configured middle bucket range."""
    if config.variant is not Variant.WEAK:
        raise ValueError("config.variant must be WEAK for run_weak_test")
    k = config.k
    records = []
    for i in weak_scan_range(config):
        s_hat, ranks = single_scale_statistic_with_ranks(split, i, k)
        reference = _reference_single_scale(ranks, k)
        se = _null_se_single_scale(k, split.n, reference)
        records.append(_record(i, s_hat, _boundary(config, i / k, reference, se)))
    records = tuple(records)
    return TestOutcome(verdict=_verdict(records), records=records,
                       k=k, n=split.n, seed=seed, config=config)
