"""Counting vague ("obfuscating") adjectives and adverbs after stemming."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import tokenize
from .porter import porter_stem
from .wordlists import stop_words

_NON_ALPHA = re.compile(r"[^a-z\s]+")


@dataclass(frozen=True)
class ObfuscationStats:
    obfuscating_word_count: int
    sentences_with_obfuscating_fraction: float


def preprocess(text: str, stops: frozenset[str] | None = None) -> list[str]:
    """Lowercase, replace punctuation and digits with spaces, drop stop
    words, Porter-stem."""
    stops = stop_words() if stops is None else stops
    cleaned = _NON_ALPHA.sub(" ", text.lower())
    return [porter_stem(t) for t in cleaned.split() if t not in stops]


def stem_list(terms: Iterable[str], stops: frozenset[str] | None = None) -> set[tuple[str, ...]]:
    out = set()
    for term in terms:
        toks = preprocess(term, stops)
        if toks:
            out.add(tuple(toks))
    return out


def _matches(tokens: Sequence[str], patterns: set[tuple[str, ...]]) -> int:
    if not patterns:
        return 0
    lengths = sorted({len(p) for p in patterns}, reverse=True)
    n = 0
    i = 0
    while i < len(tokens):
        for k in lengths:
            if tuple(tokens[i : i + k]) in patterns:
                n += 1
                i += k
                break
        else:
            i += 1
    return n


def obfuscation(text: str, obfuscating_list: Iterable[str]) -> ObfuscationStats:
    patterns = stem_list(obfuscating_list)
    if not patterns:
        raise ValueError("obfuscating-word list is empty")
    sents = tokenize.sentences(text)
    total = 0
    hit_sentences = 0
    for sent in sents:
        k = _matches(preprocess(sent), patterns)
        total += k
        hit_sentences += k > 0
    fraction = hit_sentences / len(sents) if sents else 0.0
    return ObfuscationStats(total, fraction)
