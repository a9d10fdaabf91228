"""Summary statistics for Monte Carlo trial batches.

Wilson score intervals (not Wald: the rates of interest sit near zero),
wait-time summaries, and the log-log slope fit used by the distance
scaling check.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np


def wilson_interval(successes: int, total: int,
                    z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score 95% interval for a binomial proportion."""
    if total <= 0:
        raise ValueError("total must be positive")
    if not 0 <= successes <= total:
        raise ValueError("successes out of range")
    phat = successes / total
    denom = 1 + z * z / total
    center = (phat + z * z / (2 * total)) / denom
    half = (z / denom) * math.sqrt(
        phat * (1 - phat) / total + z * z / (4 * total * total))
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass(frozen=True)
class SummaryStatistics:
    n_trials: int
    n_completed: int                  # trials that were not heralded aborts
    logical_errors: int
    logical_error_rate: float
    wilson_low: float
    wilson_high: float
    heralded_aborts: int
    abort_rate: float
    mean_wait: float
    p90_wait: float
    mean_ec_cycles: float
    retry_histogram: dict[int, int]   # verification retries -> trial count

    def to_dict(self) -> dict:
        return {
            "n_trials": self.n_trials,
            "n_completed": self.n_completed,
            "logical_errors": self.logical_errors,
            "logical_error_rate": self.logical_error_rate,
            "wilson_low": self.wilson_low,
            "wilson_high": self.wilson_high,
            "heralded_aborts": self.heralded_aborts,
            "abort_rate": self.abort_rate,
            "mean_wait": self.mean_wait,
            "p90_wait": self.p90_wait,
            "mean_ec_cycles": self.mean_ec_cycles,
            "retry_histogram": {str(k): v for k, v in
                                sorted(self.retry_histogram.items())},
        }


def summarize(records) -> SummaryStatistics:
    """Aggregate TrialRecords; the logical error rate is over completed
    (non-aborted) trials."""
    records = list(records)
    n = len(records)
    if n == 0:
        raise ValueError("no records to summarize")
    aborts = sum(r.heralded_abort for r in records)
    completed = n - aborts
    fails = sum(r.logical_error for r in records)
    rate = fails / completed if completed else 0.0
    lo, hi = wilson_interval(fails, completed) if completed else (0.0, 1.0)
    waits = np.array([r.wait_time for r in records], dtype=float)
    return SummaryStatistics(
        n_trials=n, n_completed=completed, logical_errors=fails,
        logical_error_rate=rate, wilson_low=lo, wilson_high=hi,
        heralded_aborts=aborts, abort_rate=aborts / n,
        mean_wait=float(waits.mean()),
        p90_wait=float(np.percentile(waits, 90)),
        mean_ec_cycles=float(np.mean([r.n_ec_cycles for r in records])),
        retry_histogram=dict(Counter(r.verification_retries
                                     for r in records)))


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of log(y) against log(x)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.size < 2:
        raise ValueError("need at least two matching points")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("log-log fit needs positive values")
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])
