"""Readability formulas over precomputed counts."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .counting import TextCounts

SMOG_MIN_SENTENCES = 30


class UndefinedInputError(ValueError):
    """Counts for which the formulas are undefined (no words or sentences)."""


@dataclass(frozen=True)
class ReadabilityScores:
    fre: float
    fkg: float
    ari: float
    cl: float
    gf: float
    smog: float | None
    smog_valid: bool
    dc: float | None = None


def flesch_reading_ease(words, sentences, syllables) -> float:
    return 206.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words)


def flesch_kincaid_grade(words, sentences, syllables) -> float:
    return 0.39 * (words / sentences) + 11.8 * (syllables / words) - 15.59


def automated_readability_index(words, sentences, characters) -> float:
    return 4.71 * (characters / words) + 0.5 * (words / sentences) - 21.43


def coleman_liau(words, sentences, characters) -> float:
    return 5.88 * (characters / words) - 29.6 * (sentences / words) - 15.8


def smog(polysyllables, sentences) -> float:
    return 1.0430 * math.sqrt(polysyllables * 30 / sentences) + 3.1291


def dale_chall(words, sentences, difficult_words) -> float:
    return 0.1579 * (difficult_words / words * 100) + 0.0496 * (words / sentences)


def gunning_fog(words, sentences, complex_words) -> float:
    return 0.4 * ((words / sentences) + 100 * (complex_words / words))


def readability(
    counts: TextCounts, *, force_smog: bool = False, include_dc: bool = False
) -> ReadabilityScores:
    """All formulas for one text.

    SMOG is ``None`` below 30 sentences unless ``force_smog`` is set;
    ``smog_valid`` records whether the sentence minimum was met either way.
    """
    w, s = counts.words, counts.sentences
    if w <= 0 or s <= 0:
        raise UndefinedInputError("readability needs at least one word and one sentence")
    valid = s >= SMOG_MIN_SENTENCES
    return ReadabilityScores(
        fre=flesch_reading_ease(w, s, counts.syllables),
        fkg=flesch_kincaid_grade(w, s, counts.syllables),
        ari=automated_readability_index(w, s, counts.characters),
        cl=coleman_liau(w, s, counts.characters),
        gf=gunning_fog(w, s, counts.complex_words),
        smog=smog(counts.polysyllables, s) if (valid or force_smog) else None,
        smog_valid=valid,
        dc=dale_chall(w, s, counts.difficult_words) if include_dc else None,
    )


def time_to_read(words: float, words_per_minute: float = 250.0) -> float:
    """Minutes needed to read ``words`` words."""
    if words < 0:
        raise ValueError("word count must be non-negative")
    return words / words_per_minute


def annual_reading_hours(
    mean_policy_words: float, sites_per_year: int = 1462, words_per_minute: float = 250.0
) -> float:
    """Hours per year to read the policy of every site a user visits."""
    if mean_policy_words < 0:
        raise ValueError("mean word count must be non-negative")
    return sites_per_year * (mean_policy_words / words_per_minute) / 60.0
