"""Dale-Chall difficult-word counting with the list's exemption rules."""
from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .counting import is_proper_name, sentence_tokens
from .wordlists import WordListError, load_word_list

WINDOW = 100


def load_familiar_words(path: str | Path | None) -> frozenset[str]:
    if path is None:
        raise WordListError("a familiar-word list is required for Dale-Chall scoring")
    return frozenset(w.lower() for w in load_word_list(path))


def _candidates(word: str) -> Iterable[str]:
    """Base forms whose presence on the list exempts ``word``."""
    yield word
    for poss in ("'s", "’s", "s'", "s’"):
        if word.endswith(poss):
            base = word[: -len(poss)]
            yield base
            if poss.startswith("s"):
                yield from _candidates(base)
    if word.endswith("ies") and len(word) > 4:
        yield word[:-3] + "y"
    if word.endswith("ied") and len(word) > 4:
        yield word[:-3] + "y"
    if word.endswith("es"):
        yield word[:-2]
    if word.endswith("s") and not word.endswith("ss"):
        yield word[:-1]
    if word.endswith("ed"):
        yield word[:-2]
        yield word[:-1]  # -d on a word ending in e
        if len(word) > 4 and word[-3] == word[-4]:
            yield word[:-3]  # stopped -> stop
    elif word.endswith("d"):
        yield word[:-1]
    if word.endswith("ing") and len(word) > 4:
        stem = word[:-3]
        yield stem
        yield stem + "e"
        if len(stem) > 2 and stem[-1] == stem[-2]:
            yield stem[:-1]


def _is_short_number(word: str) -> bool:
    digits = word.replace(",", "").replace(".", "")
    return digits.isdigit() and len(digits) <= 4


def is_familiar(word: str, familiar: frozenset[str]) -> bool:
    lw = word.lower()
    return any(c in familiar for c in _candidates(lw))


def count_difficult_words(text: str, familiar: frozenset[str]) -> int:
    """Words off the familiar list after exemptions.

    Regular plurals, possessives and ``-d``/``-ed``/``-es``/``-ing`` forms of
    listed words are familiar, as are numbers of up to four digits.  A
    proper name is counted at most once per 100-word window.
    """
    n = 0
    seen_names: dict[int, set[str]] = {}
    for idx, (word, start) in enumerate(sentence_tokens(text)):
        if any(ch.isdigit() for ch in word):
            if _is_short_number(word):
                continue
            n += 1
            continue
        if is_familiar(word, familiar):
            continue
        if is_proper_name(word, start):
            names = seen_names.setdefault(idx // WINDOW, set())
            if word in names:
                continue
            names.add(word)
        n += 1
    return n
