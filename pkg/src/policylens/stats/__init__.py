"""Monthly aggregation, cohort tests, correlations and label-count intervals."""
from .inference import CohortComparison, pearson, spearman_rank_corr, welch
from .poibin import PoissonBinomial, poisson_binomial, prediction_interval
from .series import MonthStats, MonthlySeries, monthly_series, series_to_csv, summarize
from .updates import cohort_split, update_rate, update_rate_series

__all__ = [
    "CohortComparison",
    "MonthStats",
    "MonthlySeries",
    "PoissonBinomial",
    "cohort_split",
    "monthly_series",
    "pearson",
    "poisson_binomial",
    "prediction_interval",
    "series_to_csv",
    "spearman_rank_corr",
    "summarize",
    "update_rate",
    "update_rate_series",
    "welch",
]
