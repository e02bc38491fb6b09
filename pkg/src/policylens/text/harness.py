"""Comparison of counting strategies against hand counts, and rank
consistency of readability scores across strategies."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ..stats.inference import spearman_rank_corr
from .counting import CountingConfig, TextCounts, count
from .readability import readability

# Library-style counting presets.  Names describe the method, not a package.
PRESETS: dict[str, CountingConfig] = {
    "canonical": CountingConfig(),
    "whitespace_words": CountingConfig(word_strategy="whitespace_split"),
    "regex_sentences": CountingConfig(sentence_strategy="regex"),
    "whitespace_regex_fulltext": CountingConfig(
        word_strategy="whitespace_split",
        sentence_strategy="regex",
        character_strategy="full_text_no_punct_no_space",
    ),
}

COUNT_FIELDS = ("words", "sentences", "syllables", "characters", "polysyllables")


@dataclass(frozen=True)
class Passage:
    name: str
    text: str
    manual: TextCounts


def deviation_pct(observed: float, truth: float) -> float:
    """Signed deviation in percent of the true count."""
    if truth == 0:
        return 0.0 if observed == 0 else float("inf")
    return 100.0 * (observed - truth) / truth


def deviations(passages: Sequence[Passage], config: CountingConfig) -> dict[str, np.ndarray]:
    """Per-field signed deviations (%) of ``config`` from the manual counts."""
    out: dict[str, list[float]] = {f: [] for f in COUNT_FIELDS}
    for p in passages:
        got = count(p.text, config)
        for f in COUNT_FIELDS:
            out[f].append(deviation_pct(getattr(got, f), getattr(p.manual, f)))
    return {f: np.asarray(v) for f, v in out.items()}


def deviation_table(
    passages: Sequence[Passage], presets: Mapping[str, CountingConfig] = PRESETS
) -> dict[str, dict[str, float]]:
    """Median absolute deviation (%) per preset and count field."""
    table = {}
    for name, cfg in presets.items():
        dev = deviations(passages, cfg)
        table[name] = {f: float(np.median(np.abs(v))) for f, v in dev.items()}
    return table


def rank_presets(
    passages: Sequence[Passage], presets: Mapping[str, CountingConfig] = PRESETS
) -> list[str]:
    """Preset names ordered by mean absolute deviation over all fields."""
    scores = {}
    for name, cfg in presets.items():
        dev = deviations(passages, cfg)
        scores[name] = float(np.mean([np.mean(np.abs(v)) for v in dev.values()]))
    return sorted(scores, key=lambda n: (scores[n], n))


def fre_scores(texts: Sequence[str], config: CountingConfig) -> np.ndarray:
    return np.array([readability(count(t, config)).fre for t in texts])


def rank_consistency(texts: Sequence[str], a: CountingConfig, b: CountingConfig) -> float:
    """Spearman rank correlation of FRE under two counting configurations."""
    return spearman_rank_corr(fre_scores(texts, a), fre_scores(texts, b))
