"""Experiment replication, sample-file ingestion, and report serialization.

Sampling for the four-split test draws one stream of 4n variates and
deals them round-robin before sorting, exactly how a sample file is
split on ingestion, so piping a file through ``load_samples`` and
testing it gives the same verdict as testing the seeded stream
directly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .distributions import DistributionModel
from .empirical import SortedSampleSplit
from .proxy import proxy_value
from .tester import TestConfig, TestOutcome, Variant, run_full_test, run_weak_test
from . import distributions

__all__ = [
    "FileFormat",
    "ReportFormat",
    "ReplicationRow",
    "ReplicationReport",
    "sample_single",
    "sample_splits",
    "run_sampled_test",
    "replicate",
    "load_samples",
    "write_report",
]


class FileFormat(Enum):
    TEXT = "text"
    RAW_F64 = "f64"


class ReportFormat(Enum):
    JSON = "json"
    CSV = "csv"


@dataclass(frozen=True)
class ReplicationRow:
    i: int
    s_hat_mean: float
    s_hat_std: float
    proxy_s: float
    threshold: float
    boundary: float
    degenerate_count: int


@dataclass(frozen=True)
class ReplicationReport:
    rows: tuple[ReplicationRow, ...]
    reps: int
    seeds: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("replicate seeds must be pairwise distinct")


# ---------------------------------------------------------------------------
# sampling front ends
# ---------------------------------------------------------------------------

def sample_single(model: DistributionModel, n: int, seed: int) -> SortedSampleSplit:
    """One sorted split of n seeded samples."""
    return SortedSampleSplit.from_samples(distributions.sample(model, n, seed))


def sample_splits(model: DistributionModel, n: int, seed: int) -> list[SortedSampleSplit]:
    """Four sorted splits of n samples each, dealt round-robin from one stream."""
    stream = distributions.sample(model, 4 * n, seed)
    return [SortedSampleSplit.from_samples(stream[j::4]) for j in range(4)]


def run_sampled_test(model: DistributionModel, n: int, seed: int,
                     config: TestConfig) -> TestOutcome:
    """Draw per the configured variant and run the decision procedure."""
    if config.variant is Variant.WEAK:
        return run_weak_test(sample_single(model, n, seed), config, seed=seed)
    return run_full_test(sample_splits(model, n, seed), config, seed=seed)


def replicate(model: DistributionModel, reps: int, n: int, config: TestConfig,
              base_seed: int) -> ReplicationReport:
    """Run the configured tester reps times with seeds base_seed + index.

    Per bucket, aggregates mean and sample standard deviation of the
    statistic with degenerate markers left out of the moments (counted
    separately), and attaches the analytic proxy curve and the mean
    realized boundary for overlay.
    """
    if reps < 2:
        raise ValueError("reps must be >= 2")
    seeds = tuple(base_seed + r for r in range(reps))
    outcomes = [run_sampled_test(model, n, seed, config) for seed in seeds]

    rows = []
    for j, record in enumerate(outcomes[0].records):
        i = record.i
        values = [o.records[j].s_hat for o in outcomes if not o.records[j].degenerate]
        degenerate_count = reps - len(values)
        if values:
            mean = float(np.mean(values))
            std = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
        else:
            mean = math.nan
            std = math.nan
        rows.append(ReplicationRow(
            i=i,
            s_hat_mean=mean,
            s_hat_std=std,
            proxy_s=proxy_value(model, i / config.k),
            threshold=1.0 - i / config.k,
            boundary=float(np.mean([o.records[j].boundary for o in outcomes])),
            degenerate_count=degenerate_count,
        ))
    return ReplicationReport(rows=tuple(rows), reps=reps, seeds=seeds)


# ---------------------------------------------------------------------------
# file ingestion
# ---------------------------------------------------------------------------

def _reject_bad_values(arr: np.ndarray, where: str) -> None:
    bad = ~np.isfinite(arr)
    if np.any(bad):
        pos = int(np.argmax(bad))
        raise ValueError(f"non-finite value {arr[pos]!r} at {where} {pos + 1}")
    neg = arr < 0.0
    if np.any(neg):
        pos = int(np.argmax(neg))
        raise ValueError(
            f"negative value {arr[pos]!r} at {where} {pos + 1}; domain is [0, inf)"
        )


def _parse_text(path: Path) -> np.ndarray:
    out = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                out.append(float(text))
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: cannot parse {text!r}") from None
    if not out:
        raise ValueError(f"{path}: no sample values found")
    return np.asarray(out, dtype=float)


def _parse_raw_f64(path: Path) -> np.ndarray:
    raw = path.read_bytes()
    if len(raw) == 0:
        raise ValueError(f"{path}: empty file")
    if len(raw) % 8 != 0:
        raise ValueError(
            f"{path}: length {len(raw)} is not a multiple of 8 "
            f"(trailing fragment at offset {len(raw) - len(raw) % 8})"
        )
    return np.frombuffer(raw, dtype="<f8").astype(float)


def load_samples(path, fmt: FileFormat = FileFormat.TEXT, split: bool = False):
    """Load a sample file into sorted split(s).

    Text files hold one decimal literal per line; '#' comment lines and
    blank lines are skipped.  RAW_F64 is packed little-endian IEEE-754.
    Negative and non-finite values are rejected.  With ``split=True``
    the values are dealt round-robin on input order into four splits
    before sorting - fine for i.i.d. data, a deliberate warning sign
    for time-ordered data.
    """
    path = Path(path)
    arr = _parse_text(path) if fmt is FileFormat.TEXT else _parse_raw_f64(path)
    _reject_bad_values(arr, "value" if fmt is FileFormat.RAW_F64 else "sample line")
    if not split:
        return SortedSampleSplit.from_samples(arr)
    if arr.size < 4:
        raise ValueError(f"{path}: need at least 4 values to build four splits")
    return [SortedSampleSplit.from_samples(arr[j::4]) for j in range(4)]


# ---------------------------------------------------------------------------
# report serialization
# ---------------------------------------------------------------------------

def _fmt(value: float) -> str:
    """Shortest round-trip decimal (>= 12 significant digits where needed)."""
    return repr(float(value))


def _outcome_json(outcome: TestOutcome) -> dict:
    cfg = outcome.config
    buckets = []
    for r in outcome.records:
        buckets.append({
            "i": r.i,
            "s_hat": None if r.degenerate else r.s_hat,
            "boundary": r.boundary,
            "margin": None if r.degenerate else r.margin,
            "degenerate": r.degenerate,
        })
    return {
        "verdict": outcome.verdict.value,
        "k": outcome.k,
        "n": outcome.n,
        "alpha": cfg.tail.alpha,
        "rho": cfg.tail.rho,
        "beta": cfg.bounds.beta,
        "b1": cfg.bounds.b1,
        "b2": cfg.bounds.b2,
        "seed": outcome.seed,
        "buckets": buckets,
    }


def _csv_lines(rows) -> list[str]:
    lines = ["i,s_hat_mean,s_hat_std,proxy_s,threshold,boundary"]
    for r in rows:
        lines.append(",".join([
            str(r[0]), _fmt(r[1]), _fmt(r[2]), _fmt(r[3]), _fmt(r[4]), _fmt(r[5]),
        ]))
    return lines


def _replication_json(report: ReplicationReport) -> dict:
    return {
        "reps": report.reps,
        "seeds": list(report.seeds),
        "rows": [{
            "i": r.i,
            "s_hat_mean": None if math.isnan(r.s_hat_mean) else r.s_hat_mean,
            "s_hat_std": None if math.isnan(r.s_hat_std) else r.s_hat_std,
            "proxy_s": r.proxy_s,
            "threshold": r.threshold,
            "boundary": r.boundary,
            "degenerate_count": r.degenerate_count,
        } for r in report.rows],
    }


def serialize_report(report, fmt: ReportFormat = ReportFormat.JSON) -> bytes:
    """Serialize a TestOutcome or ReplicationReport to stable bytes.

    Outcome JSON follows the fixed report schema; replication JSON holds
    reps, seeds and per-bucket rows.  CSV rows are 'i,s_hat_mean,
    s_hat_std,proxy_s,threshold,boundary'; a single outcome serializes
    with std 0 and proxy_s nan (no analytic model is attached to an
    outcome).
    """
    if fmt is ReportFormat.JSON:
        if isinstance(report, TestOutcome):
            doc = _outcome_json(report)
        elif isinstance(report, ReplicationReport):
            doc = _replication_json(report)
        else:
            raise ValueError(f"cannot serialize {type(report).__name__}")
        text = json.dumps(doc, indent=2, allow_nan=False)
        return (text + "\n").encode("utf-8")

    if isinstance(report, ReplicationReport):
        rows = [(r.i, r.s_hat_mean, r.s_hat_std, r.proxy_s, r.threshold, r.boundary)
                for r in report.rows]
    elif isinstance(report, TestOutcome):
        rows = [(r.i, r.s_hat if not r.degenerate else math.nan, 0.0, math.nan,
                 1.0 - r.i / report.k, r.boundary)
                for r in report.records]
    else:
        raise ValueError(f"cannot serialize {type(report).__name__}")
    return ("\n".join(_csv_lines(rows)) + "\n").encode("utf-8")


def write_report(report, sink, fmt: ReportFormat = ReportFormat.JSON) -> bytes:
    """Serialize and write to a path or binary file object; returns the bytes."""
    payload = serialize_report(report, fmt)
    if hasattr(sink, "write"):
        sink.write(payload)
    else:
        Path(sink).write_bytes(payload)
    return payload
