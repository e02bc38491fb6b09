"""Pattern-based passive-voice sentence detection.

A sentence is passive when a form of "to be" is followed, within three
tokens, by a past participle, with only adverbs, negations or further
be-forms in between.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import tokenize
from .wordlists import irregular_participles

BE_FORMS = frozenset({"am", "is", "are", "was", "were", "be", "been", "being", "'s", "’s"})
WINDOW = 3

_ADVERBS = frozenset(
    """
    not never also always often only still already just usually generally
    typically further then thus therefore sometimes automatically currently
    regularly periodically actively routinely primarily mainly then ever
    """.split()
)
_NOT_PARTICIPLES = frozenset(
    "need feed seed speed bed red shed bleed breed indeed exceed proceed succeed hundred".split()
)


@dataclass(frozen=True)
class PassiveStats:
    passive_sentence_fraction: float


def is_participle(token: str, irregular: frozenset[str]) -> bool:
    t = token.lower()
    if t in irregular:
        return True
    return len(t) > 3 and t.endswith("ed") and t not in _NOT_PARTICIPLES


def _is_adverb(token: str) -> bool:
    t = token.lower()
    return t in _ADVERBS or (len(t) > 4 and t.endswith("ly")) or t in ("n't", "not")


def is_passive(sentence: str, irregular: frozenset[str] | None = None) -> bool:
    irregular = irregular_participles() if irregular is None else irregular
    toks = [t.lower() for t in tokenize.words(sentence)]
    for i, tok in enumerate(toks):
        if tok not in BE_FORMS:
            continue
        for nxt in toks[i + 1 : i + 1 + WINDOW]:
            if is_participle(nxt, irregular) and nxt not in BE_FORMS:
                return True
            if nxt in BE_FORMS or _is_adverb(nxt):
                continue
            break
    return False


def passive_fraction(text: str) -> PassiveStats:
    sents = tokenize.sentences(text)
    if not sents:
        return PassiveStats(0.0)
    irregular = irregular_participles()
    passive = sum(is_passive(s, irregular) for s in sents)
    return PassiveStats(passive / len(sents))
