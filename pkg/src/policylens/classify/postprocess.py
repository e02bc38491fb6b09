"""Label de-duplication within a policy and first-mention dating."""
from __future__ import annotations

from typing import Hashable, Iterable

from .hierarchy import THRESHOLD, SegmentLabels
from .schema import Label


def dedup_labels(
    segments: Iterable[SegmentLabels],
    threshold: float = THRESHOLD,
    excluded: Iterable[Label] = (),
) -> list[SegmentLabels]:
    """Keep the first segment of every distinct thresholded label set."""
    excluded = frozenset(excluded)
    seen: set[frozenset] = set()
    out = []
    for seg in segments:
        key = seg.labels(threshold, excluded)
        if key not in seen:
            seen.add(key)
            out.append(seg)
    return out


def first_mention(timeline: Iterable[tuple[Hashable, object, Iterable[Hashable]]]) -> dict:
    """site -> label -> earliest date, from (site, date, labels) entries in
    any order."""
    out: dict = {}
    for site, date, labels in timeline:
        per = out.setdefault(site, {})
        for lab in labels:
            if lab not in per or date < per[lab]:
                per[lab] = date
    return out
