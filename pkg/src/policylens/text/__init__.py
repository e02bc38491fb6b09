"""Length, readability, obfuscation and passive-voice measures."""
from .counting import CANONICAL, CountingConfig, TextCounts, count, syllables
from .difficulty import count_difficult_words, load_familiar_words
from .obfuscation import ObfuscationStats, obfuscation
from .passive import PassiveStats, passive_fraction
from .porter import porter_stem
from .readability import (
    ReadabilityScores,
    UndefinedInputError,
    annual_reading_hours,
    readability,
    time_to_read,
)
from ..stats.inference import spearman_rank_corr

__all__ = [
    "CANONICAL",
    "CountingConfig",
    "ObfuscationStats",
    "PassiveStats",
    "ReadabilityScores",
    "TextCounts",
    "UndefinedInputError",
    "annual_reading_hours",
    "count",
    "count_difficult_words",
    "load_familiar_words",
    "obfuscation",
    "passive_fraction",
    "porter_stem",
    "readability",
    "spearman_rank_corr",
    "syllables",
    "time_to_read",
]
