"""Policy update rates and cohort membership."""
from __future__ import annotations

from typing import Callable, Iterable, Mapping

from ..text.tokenize import sentences
from ..timeline import Month, previous_month


def sentence_set(text: str) -> frozenset[str]:
    return frozenset(" ".join(s.split()) for s in sentences(text))


def changed(old: str, new: str) -> bool:
    """True if the two texts differ by at least one sentence."""
    return sentence_set(old) != sentence_set(new)


def update_rate(
    active: Mapping[Month, Mapping[str, str]],
    month: Month,
    sentences_of: Callable[[str], frozenset[str]],
) -> float | None:
    """Fraction of sites whose policy sentence set changed since the
    previous month.  Sites not present in both months are left out; None
    when no site qualifies."""
    now = active.get(month, {})
    before = active.get(previous_month(month), {})
    sites = [s for s in now if s in before]
    if not sites:
        return None
    updated = 0
    for s in sites:
        a, b = before[s], now[s]
        if a != b and sentences_of(a) != sentences_of(b):
            updated += 1
    return updated / len(sites)


def update_rate_series(
    active: Mapping[Month, Mapping[str, str]],
    texts: Mapping[str, str],
) -> dict[Month, tuple[float, int]]:
    """month -> (update rate, number of sites compared)."""
    cache: dict[str, frozenset[str]] = {}

    def sents(h: str) -> frozenset[str]:
        if h not in cache:
            cache[h] = sentence_set(texts[h])
        return cache[h]

    out = {}
    for month in sorted(active):
        prev = active.get(previous_month(month), {})
        n = sum(1 for s in active[month] if s in prev)
        rate = update_rate(active, month, sents)
        if rate is not None:
            out[month] = (rate, n)
    return out


def cohort_split(
    site_hashes: Mapping[str, Iterable[str]],
    mentions: Callable[[str], bool],
) -> tuple[set[str], set[str]]:
    """(sites whose policy ever mentions the term, all other sites)."""
    yes, no = set(), set()
    for site, hashes in site_hashes.items():
        (yes if any(mentions(h) for h in hashes) else no).add(site)
    return yes, no
