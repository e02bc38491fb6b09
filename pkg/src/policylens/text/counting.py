"""Counting inputs for readability formulas, with interchangeable strategies
for words, sentences, syllables and characters."""
from __future__ import annotations

import re
import string
from dataclasses import dataclass, field
from typing import Mapping

from . import tokenize

WORD_STRATEGIES = ("whitespace_split", "tokenizer")
SENTENCE_STRATEGIES = ("regex", "tokenizer")
SYLLABLE_STRATEGIES = ("vowel_groups", "hyphenation_dict")
CHARACTER_STRATEGIES = ("per_word_no_punct_no_digits", "full_text_no_punct_no_space")

_VOWEL_RUN = re.compile(r"[aeiouy]+")
_PUNCT = frozenset(string.punctuation) | frozenset("“”‘’–—…•·«»¿¡§©®™")


@dataclass(frozen=True)
class CountingConfig:
    word_strategy: str = "tokenizer"
    sentence_strategy: str = "tokenizer"
    syllable_strategy: str = "vowel_groups"
    character_strategy: str = "per_word_no_punct_no_digits"
    hyphenation: Mapping[str, int] | None = field(default=None, compare=False, repr=False)
    familiar_words: frozenset[str] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        for name, allowed in (
            ("word_strategy", WORD_STRATEGIES),
            ("sentence_strategy", SENTENCE_STRATEGIES),
            ("syllable_strategy", SYLLABLE_STRATEGIES),
            ("character_strategy", CHARACTER_STRATEGIES),
        ):
            if getattr(self, name) not in allowed:
                raise ValueError(f"{name} must be one of {allowed}, got {getattr(self, name)!r}")


CANONICAL = CountingConfig()


@dataclass(frozen=True)
class TextCounts:
    words: int
    sentences: int
    syllables: int
    characters: int
    polysyllables: int
    difficult_words: int
    complex_words: int


def vowel_group_syllables(word: str) -> int:
    """Runs of a/e/i/o/u/y count one each, minus a silent final ``e``.
    Every word has at least one."""
    w = "".join(ch for ch in word.lower() if ch.isalpha())
    if not w:
        return 1
    n = len(_VOWEL_RUN.findall(w))
    if _silent_final_e(w):
        n -= 1
    return max(n, 1)


def _silent_final_e(w: str) -> bool:
    """Final ``e`` after a consonant, also inside ``-ed``/``-es`` endings
    (stored, leaves) but sounded after t/d (wanted), after sibilants and soft
    c/g (boxes, pages), and in consonant+``le`` endings (table, tables)."""
    if w.endswith("e"):
        stem, ending = w[:-1], ""
    elif w.endswith(("ed", "es")) and len(w) >= 4:
        stem, ending = w[:-2], w[-1]
    else:
        return False
    if len(stem) < 1 or stem[-1] in "aeiouy":
        return False
    if stem[-1] == "l" and len(stem) >= 2 and stem[-2] not in "aeiouy":
        return False
    if ending == "d" and stem[-1] in "td":
        return False
    if ending == "s" and (stem[-1] in "sxzcg" or stem.endswith(("ch", "sh"))):
        return False
    return True


def syllables(word: str, config: CountingConfig = CANONICAL) -> int:
    if config.syllable_strategy == "hyphenation_dict" and config.hyphenation:
        key = "".join(ch for ch in word.lower() if ch.isalpha())
        hit = config.hyphenation.get(key)
        if hit is not None:
            return hit
    return vowel_group_syllables(word)


def count_words(text: str, config: CountingConfig = CANONICAL) -> list[str]:
    if config.word_strategy == "whitespace_split":
        return tokenize.whitespace_tokens(text)
    return tokenize.words(text)


def count_sentences(text: str, config: CountingConfig = CANONICAL) -> list[str]:
    if config.sentence_strategy == "regex":
        return tokenize.regex_sentences(text)
    return tokenize.sentences(text)


def count_characters(text: str, word_list: list[str], config: CountingConfig = CANONICAL) -> int:
    if config.character_strategy == "full_text_no_punct_no_space":
        return sum(1 for ch in text if not ch.isspace() and ch not in _PUNCT)
    return sum(1 for w in word_list for ch in w if ch.isalpha())


def sentence_tokens(text: str) -> list[tuple[str, bool]]:
    """(word, starts_sentence) pairs in canonical sentence order."""
    out = []
    for sent in tokenize.sentences(text):
        for i, w in enumerate(tokenize.words(sent)):
            out.append((w, i == 0))
    return out


def is_proper_name(word: str, sentence_start: bool) -> bool:
    # no entity recognition: any capitalized word inside a sentence
    return not sentence_start and word[:1].isupper() and word != "I"


def _strip_gf_suffix(word: str) -> str:
    lw = word.lower()
    for suffix in ("ing", "es", "ed"):
        if lw.endswith(suffix) and len(lw) > len(suffix) + 2:
            return lw[: -len(suffix)]
    return lw


def count_complex_words(text: str, config: CountingConfig = CANONICAL) -> int:
    """Gunning-Fog complex words: three or more syllables once ``-es``,
    ``-ed`` and ``-ing`` are stripped, proper names excluded.  The jargon and
    compound-word exemptions are not applied."""
    n = 0
    for word, start in sentence_tokens(text):
        if is_proper_name(word, start):
            continue
        if syllables(_strip_gf_suffix(word), config) >= 3:
            n += 1
    return n


def count(text: str, config: CountingConfig = CANONICAL) -> TextCounts:
    if not text or not text.strip():
        raise ValueError("text must be non-empty")
    word_list = count_words(text, config)
    sents = count_sentences(text, config)
    syl = [syllables(w, config) for w in word_list]
    difficult = 0
    if config.familiar_words is not None:
        from .difficulty import count_difficult_words

        difficult = count_difficult_words(text, config.familiar_words)
    return TextCounts(
        words=len(word_list),
        sentences=len(sents),
        syllables=sum(syl),
        characters=count_characters(text, word_list, config),
        polysyllables=sum(1 for s in syl if s >= 3),
        difficult_words=min(difficult, len(word_list)),
        complex_words=min(count_complex_words(text, config), len(word_list)),
    )
