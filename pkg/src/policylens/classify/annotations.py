"""Annotation ingestion and majority-vote consolidation.

Annotation files are CSV with one row per (segment, annotator, label)::

    segment_id,policy_id,text,annotator,level,name,value

``level`` is ``category`` (``value`` empty) or ``attribute``.
:func:`convert_opp115` produces this layout from the OPP-115 distribution
(``annotations/*.csv`` plus ``sanitized_policies/*.html``).
"""
from __future__ import annotations

import csv
import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from bs4 import BeautifulSoup

from .schema import Label, LabelSchema, _fold, attribute, category

log = logging.getLogger(__name__)

CSV_COLUMNS = ("segment_id", "policy_id", "text", "annotator", "level", "name", "value")


@dataclass(frozen=True)
class AnnotatedSegment:
    segment_id: str
    text: str
    annotator_labels: Mapping[str, frozenset[Label]]
    policy_id: str = ""

    def __post_init__(self):
        if not self.annotator_labels:
            raise ValueError(f"segment {self.segment_id!r} has no annotators")


@dataclass
class ConsolidatedSegment:
    segment_id: str
    text: str
    labels: frozenset[Label]
    policy_id: str = ""
    categories: frozenset[str] = field(init=False)

    def __post_init__(self):
        self.categories = frozenset(l.name for l in self.labels if l.level == "category")

    def attribute_values(self, attr: str) -> frozenset[str]:
        return frozenset(l.value for l in self.labels if l.level == "attribute" and l.name == attr)


def consolidate(
    seg: AnnotatedSegment,
    min_agree: int = 2,
    schema: LabelSchema | None = None,
) -> frozenset[Label]:
    """Labels assigned by at least ``min_agree`` annotators.

    Spelling is compared case-insensitively.  With a schema, labels are
    mapped to the schema's spelling and unknown labels are dropped;
    without one, the alphabetically first spelling seen is kept.
    """
    if min_agree < 1:
        raise ValueError("min_agree must be >= 1")
    votes: Counter = Counter()
    spelling: dict[tuple, str] = {}
    for labels in seg.annotator_labels.values():
        keys = set()
        for lab in labels:
            lab = Label(*lab)
            if schema is not None:
                lab = schema.normalize(lab)
                if lab is None:
                    continue
            k = (lab.level, _fold(lab.name), _fold(lab.value))
            keys.add(k)
            if k not in spelling or tuple(lab) < spelling[k]:
                spelling[k] = tuple(lab)
        votes.update(keys)
    return frozenset(Label(*spelling[k]) for k, n in votes.items() if n >= min_agree)


def consolidate_all(
    segments: Iterable[AnnotatedSegment],
    schema: LabelSchema,
    min_agree: int = 2,
) -> list[ConsolidatedSegment]:
    return [
        ConsolidatedSegment(s.segment_id, s.text, consolidate(s, min_agree, schema), s.policy_id)
        for s in segments
    ]


# -- CSV layout ---------------------------------------------------------------


def read_annotations(path: str | Path) -> list[AnnotatedSegment]:
    """Annotated segments from a CSV file or a directory of CSV files, in
    order of first appearance."""
    path = Path(path)
    files = sorted(path.glob("*.csv")) if path.is_dir() else [path]
    texts: dict[str, tuple[str, str]] = {}
    labels: dict[str, dict[str, set]] = defaultdict(lambda: defaultdict(set))
    for f in files:
        with open(f, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            missing = set(CSV_COLUMNS) - set(reader.fieldnames or ())
            if missing:
                raise ValueError(f"{f}: missing columns {sorted(missing)}")
            for row in reader:
                sid = row["segment_id"]
                texts.setdefault(sid, (row["text"], row["policy_id"]))
                level = row["level"].strip().lower()
                if level not in ("category", "attribute"):
                    log.warning("%s: unknown level %r", f, row["level"])
                    continue
                value = row["value"] if level == "attribute" else ""
                labels[sid][row["annotator"]].add(Label(level, row["name"], value))
    return [
        AnnotatedSegment(sid, text, {a: frozenset(ls) for a, ls in labels[sid].items()}, pid)
        for sid, (text, pid) in texts.items()
        if labels[sid]
    ]


def write_annotations(segments: Iterable[AnnotatedSegment], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for s in segments:
            for annotator in sorted(s.annotator_labels):
                for lab in sorted(s.annotator_labels[annotator]):
                    w.writerow([s.segment_id, s.policy_id, s.text, annotator, *lab])


# -- OPP-115 distribution -------------------------------------------------------


def _opp115_labels(category_name: str, attrs_json: str) -> set[Label]:
    out = set()
    try:
        attrs = json.loads(attrs_json) if attrs_json else {}
    except json.JSONDecodeError:
        attrs = {}
    if category_name == "Other":
        other = attrs.get("Other Type", {}).get("value")
        if other:
            out.add(category(f"Other/{other}"))
        return out
    out.add(category(category_name))
    for name, info in attrs.items():
        value = info.get("value") if isinstance(info, dict) else None
        if value and value != "not-selected":
            out.add(attribute(name, value))
    return out


def convert_opp115(root: str | Path) -> list[AnnotatedSegment]:
    """Read the OPP-115 release layout: ``annotations/<id>_<name>.csv``
    (annotation id, batch, annotator, policy id, segment id, category,
    attribute JSON, url, date) with segment texts from
    ``sanitized_policies/<id>_<name>.html`` separated by ``|||``."""
    root = Path(root)
    out = []
    for ann_file in sorted(root.joinpath("annotations").glob("*.csv")):
        html = root / "sanitized_policies" / (ann_file.stem + ".html")
        if not html.exists():
            log.warning("no policy text for %s", ann_file.name)
            continue
        raw_segments = html.read_text(encoding="utf-8", errors="replace").split("|||")
        seg_texts = [" ".join(BeautifulSoup(s, "html.parser").get_text(" ").split()) for s in raw_segments]
        per_seg: dict[int, dict[str, set]] = defaultdict(lambda: defaultdict(set))
        with open(ann_file, newline="", encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if len(row) < 7:
                    continue
                try:
                    seg_id = int(row[4])
                except ValueError:
                    continue
                per_seg[seg_id][row[2]] |= _opp115_labels(row[5], row[6])
        for seg_id in sorted(per_seg):
            if seg_id >= len(seg_texts):
                continue
            out.append(AnnotatedSegment(
                f"{ann_file.stem}:{seg_id}",
                seg_texts[seg_id],
                {a: frozenset(ls) for a, ls in per_seg[seg_id].items()},
                ann_file.stem,
            ))
    return out
