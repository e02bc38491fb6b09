"""Assigning policy versions to sites and months."""
from __future__ import annotations

from collections import defaultdict
from datetime import datetime
from typing import Callable, Iterable

Month = str  # "YYYY-MM"


def month_of(ts: datetime) -> Month:
    return f"{ts.year:04d}-{ts.month:02d}"


def next_month(month: Month) -> Month:
    y, m = map(int, month.split("-"))
    return f"{y + m // 12:04d}-{m % 12 + 1:02d}"


def previous_month(month: Month) -> Month:
    y, m = map(int, month.split("-"))
    return f"{y - (m == 1):04d}-{(m - 2) % 12 + 1:02d}"


def month_range(start: Month, end: Month) -> list[Month]:
    out = []
    m = start
    while m <= end:
        out.append(m)
        m = next_month(m)
    return out


def site_timelines(
    observations: Iterable[tuple[str, datetime, str]],
    length: Callable[[str], int],
) -> dict[str, dict[Month, str]]:
    """site -> month -> content hash from (site, timestamp, hash) triples.

    When a month holds several different texts for a site (moved links,
    summary plus full policy) the longest is kept; ties go to the smaller
    hash so the choice is deterministic.
    """
    per: dict[str, dict[Month, set[str]]] = defaultdict(lambda: defaultdict(set))
    for site, ts, h in observations:
        per[site][month_of(ts)].add(h)
    out = {}
    for site in sorted(per):
        out[site] = {
            m: min(hs, key=lambda h: (-length(h), h))
            for m, hs in sorted(per[site].items())
        }
    return out


def active_policies(timelines: dict[str, dict[Month, str]]) -> dict[Month, dict[str, str]]:
    """month -> site -> hash of the policy in force.

    A site's policy stays in force from one observation until the next; a
    site counts from its first to its last observed month.
    """
    active: dict[Month, dict[str, str]] = defaultdict(dict)
    for site, months in timelines.items():
        if not months:
            continue
        ordered = sorted(months)
        current = None
        for m in month_range(ordered[0], ordered[-1]):
            current = months.get(m, current)
            active[m][site] = current
    return {m: dict(sorted(active[m].items())) for m in sorted(active)}
