"""Poisson-Binomial distribution of a count of independent, non-identical
Bernoulli outcomes, and prediction intervals read off its CDF."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..kernels import poibin_pmf

MAX_TRIALS = 10**6


@dataclass(frozen=True)
class PoissonBinomial:
    probabilities: np.ndarray
    pmf: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return int(self.probabilities.shape[0])

    @property
    def mean(self) -> float:
        return float(self.probabilities.sum())

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.pmf)


def poisson_binomial(probabilities: Sequence[float]) -> PoissonBinomial:
    """Exact pmf by convolving one Bernoulli trial at a time.

    Raises ``ValueError`` if any probability lies outside [0, 1].
    """
    p = np.asarray(list(probabilities), dtype=np.float64).reshape(-1)
    if p.size > MAX_TRIALS:
        raise ValueError(f"at most {MAX_TRIALS} trials supported, got {p.size}")
    if not np.all(np.isfinite(p)) or np.any(p < 0.0) or np.any(p > 1.0):
        raise ValueError("probabilities must lie in [0, 1]")
    pmf = poibin_pmf(p)
    return PoissonBinomial(probabilities=p, pmf=pmf)


def prediction_interval(
    dist: PoissonBinomial, low: float = 0.025, high: float = 0.975
) -> tuple[int, int]:
    """Smallest k with CDF(k) >= low, and smallest k with CDF(k) >= high."""
    if not 0.0 <= low <= high <= 1.0:
        raise ValueError("need 0 <= low <= high <= 1")
    cdf = dist.cdf()
    # guard against the last entry landing a hair below 1.0
    cdf[-1] = max(cdf[-1], 1.0)
    k_low = int(np.searchsorted(cdf, low, side="left"))
    k_high = int(np.searchsorted(cdf, high, side="left"))
    return min(k_low, dist.n), min(k_high, dist.n)
