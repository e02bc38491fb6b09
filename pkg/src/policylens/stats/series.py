"""Per-month aggregates of a metric: mean, normal-approximation 95% CI and
type-7 quartiles."""
from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

import numpy as np

Z_95 = 1.96
SERIES_COLUMNS = ("month", "mean", "ci_low", "ci_high", "q25", "q75", "n")


@dataclass(frozen=True)
class MonthStats:
    mean: float
    ci_low: float
    ci_high: float
    q25: float
    q75: float
    n: int


MonthlySeries = dict  # month ("YYYY-MM") -> MonthStats, ordered by month


def summarize(values: Iterable[float]) -> MonthStats:
    v = np.asarray(list(values), dtype=np.float64)
    if v.size == 0:
        raise ValueError("cannot summarize an empty sample")
    mean = float(v.mean())
    if v.size > 1:
        half = Z_95 * float(v.std(ddof=1)) / math.sqrt(v.size)
    else:
        half = 0.0
    q25, q75 = (float(q) for q in np.quantile(v, [0.25, 0.75], method="linear"))
    return MonthStats(mean, mean - half, mean + half, q25, q75, int(v.size))


def monthly_series(observations: Iterable[tuple[str, float]]) -> MonthlySeries:
    groups: dict[str, list[float]] = defaultdict(list)
    for month, value in observations:
        groups[month].append(float(value))
    return {m: summarize(groups[m]) for m in sorted(groups)}


def series_to_csv(series: MonthlySeries, extra: dict[str, str] | None = None) -> str:
    """Long-format CSV; ``extra`` adds constant leading columns (e.g. metric)."""
    extra = extra or {}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([*extra.keys(), *SERIES_COLUMNS])
    for month, s in series.items():
        writer.writerow([
            *extra.values(), month, _fmt(s.mean), _fmt(s.ci_low), _fmt(s.ci_high),
            _fmt(s.q25), _fmt(s.q75), s.n,
        ])
    return buf.getvalue()


def _fmt(x: float) -> str:
    return repr(round(float(x), 10))
