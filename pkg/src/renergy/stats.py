"""Small statistical helpers shared by the simulator and the run harness."""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np
from scipy import stats as sps


def wilson_ci(successes: int, n: int, level: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n <= 0:
        raise ValueError("n must be positive")
    if not 0 <= successes <= n:
        raise ValueError("successes must lie in [0, n]")
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    z = sps.norm.ppf(0.5 * (1.0 + level))
    p = successes / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1.0 - p) / n + z * z / (4 * n * n)) / denom
    # the score interval touches the boundary exactly at the extremes
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == n else min(1.0, center + half)
    return lo, hi


class KSResult(NamedTuple):
    statistic: float
    critical: float
    n: int
    passed: bool


def ks_statistic(samples: np.ndarray, cdf: Callable[[np.ndarray], np.ndarray],
                 level: float = 0.01) -> KSResult:
    """One-sample Kolmogorov-Smirnov test against an exact CDF.

    Uses the asymptotic critical value of the Kolmogorov distribution, which
    is why at least 100 samples are required.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    if n < 100:
        raise ValueError("need at least 100 samples for the asymptotic KS test")
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    f = np.asarray(cdf(x), dtype=float)
    if np.any(f < -1e-12) or np.any(f > 1 + 1e-12):
        raise ValueError("cdf values must lie in [0, 1]")
    i = np.arange(1, n + 1)
    d = max(float(np.max(i / n - f)), float(np.max(f - (i - 1) / n)))
    critical = float(sps.kstwobign.isf(level)) / math.sqrt(n)
    return KSResult(d, critical, n, d <= critical)
