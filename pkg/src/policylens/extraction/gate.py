"""Language, length and policy-likelihood filtering of extracted texts."""
from __future__ import annotations

import logging
import threading
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..classify.backends import LinearBackend
from ..text.tokenize import words

log = logging.getLogger(__name__)

MIN_WORDS = 100
PolicyScorer = Callable[[str], float]

_detect_lock = threading.Lock()


@dataclass(frozen=True)
class GateVerdict:
    language: str
    language_confident: bool
    word_count: int
    policy_probabilities: list[float] = field(default_factory=list)
    passed: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def detect_language(text: str) -> tuple[str, float]:
    """Most probable language code and its probability ("und", 0.0 on
    failure).  Seeded, so repeated calls agree."""
    from langdetect import DetectorFactory, detect_langs
    from langdetect.lang_detect_exception import LangDetectException

    sample = text[:20000]
    with _detect_lock:
        DetectorFactory.seed = 0
        try:
            ranked = detect_langs(sample)
        except LangDetectException:
            return "und", 0.0
    if not ranked:
        return "und", 0.0
    return ranked[0].lang, float(ranked[0].prob)


def gate(
    text: str,
    classifiers: Sequence[tuple[PolicyScorer, float]] = (),
    *,
    min_words: int = MIN_WORDS,
    language_detector: Callable[[str], tuple[str, float]] = detect_language,
) -> GateVerdict:
    """Keep a text if it is English, has at least ``min_words`` words, and
    at least one policy classifier scores it at or above its threshold.

    With no classifiers configured the policy-likelihood check is skipped.
    """
    for _, threshold in classifiers:
        if not 0.0 <= threshold <= 1.0:
            raise ValueError(f"threshold {threshold} outside [0, 1]")
    try:
        lang, prob = language_detector(text)
    except Exception:  # noqa: BLE001 - any detector failure means "not English"
        log.warning("language detection failed", exc_info=True)
        lang, prob = "und", 0.0
    n_words = len(words(text))
    probs = [float(scorer(text)) for scorer, _ in classifiers]
    english = lang == "en"
    long_enough = n_words >= min_words
    all_low = bool(classifiers) and all(p < t for p, (_, t) in zip(probs, classifiers))
    return GateVerdict(
        language=lang,
        language_confident=prob >= 0.5,
        word_count=n_words,
        policy_probabilities=probs,
        passed=english and long_enough and not all_low,
    )


class PolicyClassifier:
    """Policy vs. non-policy text scorer; a picklable :data:`PolicyScorer`."""

    def __init__(self, seed: int = 0):
        self.backend = LinearBackend(seed=seed)

    def fit(self, policies: Sequence[str], others: Sequence[str]) -> "PolicyClassifier":
        if not policies or not others:
            raise ValueError("need both policy and non-policy examples")
        y = np.array([[1]] * len(policies) + [[0]] * len(others))
        self.backend.fit(list(policies) + list(others), y)
        return self

    def __call__(self, text: str) -> float:
        return float(self.backend.predict_proba([text])[0, 0])
