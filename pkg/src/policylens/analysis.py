"""Corpus-level analyses over the stored snapshots and unique texts."""
from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from dataclasses import asdict, dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .classify.hierarchy import SegmentLabels
from .classify.schema import Label
from .extraction.store import CorpusStore, UniquePolicyText
from .stats.inference import welch
from .stats.poibin import poisson_binomial, prediction_interval
from .stats.series import monthly_series
from .stats.updates import cohort_split, update_rate_series
from .terms import TermSpec, mentions
from .text.counting import CountingConfig, count
from .text.obfuscation import obfuscation
from .text.passive import passive_fraction
from .text.readability import UndefinedInputError, readability, time_to_read
from .timeline import Month, active_policies, site_timelines

METRIC_COLUMNS = (
    "content_hash", "site", "first_seen",
    "words", "sentences", "syllables", "characters", "polysyllables", "difficult_words",
    "complex_words", "fre", "fkg", "ari", "cl", "gf", "smog", "smog_valid", "dc",
    "obfuscating_word_count", "sentences_with_obfuscating_fraction",
    "passive_sentence_fraction", "time_to_read",
)
SERIES_METRICS = (
    "words", "sentences", "fre", "fkg", "ari", "cl", "gf", "smog",
    "obfuscating_word_count", "sentences_with_obfuscating_fraction",
    "passive_sentence_fraction", "time_to_read",
)


def fmt(x) -> str:
    """Stable text form for CSV cells."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        if math.isnan(x):
            return "nan"
        return repr(round(float(x), 10))
    return str(x)


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


# -- corpus view ----------------------------------------------------------------


@dataclass
class CorpusView:
    uniques: dict[str, UniquePolicyText]
    timelines: dict[str, dict[Month, str]]
    active: dict[Month, dict[str, str]]
    snapshot_count: int

    @property
    def texts(self) -> dict[str, str]:
        return {h: u.text for h, u in self.uniques.items()}

    def site_hashes(self) -> dict[str, list[str]]:
        return {site: sorted(set(months.values())) for site, months in self.timelines.items()}


def corpus_view(store: CorpusStore) -> CorpusView:
    uniques = {u.content_hash: u for u in store.uniques()}
    obs = [(s.site, s.archive_timestamp, s.text_ref) for s in store.snapshots() if s.text_ref]
    timelines = site_timelines(obs, lambda h: len(uniques[h].text))
    return CorpusView(uniques, timelines, active_policies(timelines), len(obs))


# -- per-policy metrics -----------------------------------------------------------


def metric_row(
    u: UniquePolicyText,
    config: CountingConfig,
    obfuscating: Sequence[str],
    include_dc: bool = False,
) -> dict:
    c = count(u.text, config)
    try:
        r = readability(c, include_dc=include_dc)
        scores = asdict(r)
    except UndefinedInputError:
        scores = dict.fromkeys(("fre", "fkg", "ari", "cl", "gf", "smog", "dc"), None)
        scores["smog_valid"] = False
    ob = obfuscation(u.text, obfuscating)
    row = {"content_hash": u.content_hash, "site": u.site, "first_seen": u.first_seen.strftime("%Y-%m-%d")}
    row.update(asdict(c))
    row.update(scores)
    row.update(asdict(ob))
    row["passive_sentence_fraction"] = passive_fraction(u.text).passive_sentence_fraction
    row["time_to_read"] = time_to_read(c.words)
    return row


def metric_rows(view: CorpusView, config: CountingConfig, obfuscating: Sequence[str],
                include_dc: bool = False) -> list[dict]:
    rows = [metric_row(u, config, obfuscating, include_dc) for u in view.uniques.values()]
    rows.sort(key=lambda r: (r["first_seen"], r["content_hash"]))
    return rows


def metrics_csv(rows: Sequence[dict]) -> str:
    return to_csv(METRIC_COLUMNS, ([r[c] for c in METRIC_COLUMNS] for r in rows))


def read_metrics_csv(text: str) -> dict[str, dict]:
    out = {}
    for row in csv.DictReader(io.StringIO(text)):
        out[row["content_hash"]] = row
    return out


def metric_series(view: CorpusView, by_hash: Mapping[str, Mapping], metric: str):
    """Monthly series of ``metric`` over the policies in force each month;
    blank values (e.g. SMOG below its sentence minimum) are skipped."""
    obs = []
    for month, sites in view.active.items():
        for h in sites.values():
            v = by_hash[h][metric]
            if v is None or v == "":
                continue
            obs.append((month, float(v)))
    return monthly_series(obs)


def series_rows(series, leading: Sequence = ()) -> list[list]:
    return [[*leading, m, s.mean, s.ci_low, s.ci_high, s.q25, s.q75, s.n] for m, s in series.items()]


SERIES_HEADER = ("month", "mean", "ci_low", "ci_high", "q25", "q75", "n")


# -- timeline reports -----------------------------------------------------------------


def policies_per_year(store: CorpusStore, view: CorpusView) -> list[tuple[int, int, int]]:
    """(year, snapshots with text, unique texts first seen that year)."""
    snaps: dict[int, int] = defaultdict(int)
    for s in store.snapshots():
        if s.text_ref:
            snaps[s.archive_timestamp.year] += 1
    firsts: dict[int, int] = defaultdict(int)
    for u in view.uniques.values():
        firsts[u.first_seen.year] += 1
    return [(y, snaps.get(y, 0), firsts.get(y, 0)) for y in sorted(set(snaps) | set(firsts))]


def update_rows(view: CorpusView) -> list[tuple[str, float, int]]:
    return [(m, rate, n) for m, (rate, n) in update_rate_series(view.active, view.texts).items()]


# -- cohort comparison -------------------------------------------------------------------


def compare_cohorts(
    view: CorpusView,
    values: Mapping[str, float],
    term: TermSpec,
    before: Month,
    after: Month,
) -> dict:
    """Welch test of a per-policy metric between two months, separately for
    sites whose policies ever mention ``term`` and the rest."""
    mention = {h: mentions(t, term) for h, t in view.texts.items()}
    yes, no = cohort_split(view.site_hashes(), mention.__getitem__)
    out = {"term": term.canonical_name, "before": before, "after": after, "cohorts": {}}

    def sample(month: Month, members: set[str]) -> list[float]:
        return [values[h] for s, h in sorted(view.active.get(month, {}).items())
                if s in members and h in values]

    for name, members in (("mentions", yes), ("non_mentions", no)):
        a, b = sample(after, members), sample(before, members)
        entry = {"n_sites": len(members), "n_before": len(b), "n_after": len(a)}
        if len(a) < 2 or len(b) < 2:
            entry["computable"] = False
            entry["reason"] = "each month needs at least two policies in the cohort"
        else:
            cmp = welch(a, b)
            entry.update(computable=True, mean_before=float(np.mean(b)), mean_after=float(np.mean(a)),
                         mean_delta=float(np.mean(a) - np.mean(b)), **cmp.to_dict())
        out["cohorts"][name] = entry
    return out


# -- label aggregation --------------------------------------------------------------------


@dataclass(frozen=True)
class LabelFraction:
    year: int
    label: Label
    n_policies: int
    count: int
    expected: float
    k_low: int
    k_high: int

    @property
    def fraction(self) -> float:
        return self.count / self.n_policies

    def row(self) -> list:
        n = self.n_policies
        return [self.year, self.label.level, self.label.name, self.label.value, n, self.count,
                self.fraction, self.expected / n, self.k_low, self.k_high, self.k_low / n, self.k_high / n]


LABEL_FRACTION_HEADER = ("year", "level", "name", "value", "n_policies", "count", "fraction",
                         "expected_fraction", "k_low", "k_high", "fraction_low", "fraction_high")


def policy_label_probs(segments: Sequence[SegmentLabels]) -> dict[Label, float]:
    """Per label, the highest probability any segment of the policy gives it."""
    out: dict[Label, float] = {}
    for seg in segments:
        for c, p in seg.category_probs.items():
            lab = Label("category", c, "")
            out[lab] = max(out.get(lab, 0.0), p)
        for (a, v), p in seg.attribute_probs.items():
            lab = Label("attribute", a, v)
            out[lab] = max(out.get(lab, 0.0), p)
    return out


def yearly_policies(view: CorpusView) -> list[tuple[int, str, str]]:
    """(year, site, content hash) for the policy each site had in force at
    the last month of every year it was observed."""
    last: dict[tuple[int, str], tuple[Month, str]] = {}
    for site, months in view.timelines.items():
        for month, h in months.items():
            key = (int(month[:4]), site)
            if key not in last or month > last[key][0]:
                last[key] = (month, h)
    return [(y, site, h) for (y, site), (_, h) in sorted(last.items())]


def label_fractions(
    policies: Iterable[tuple[int, Sequence[SegmentLabels]]],
    labels: Sequence[Label],
    threshold: float = 0.5,
) -> list[LabelFraction]:
    """Per year and label: policies whose confidence exceeds ``threshold``,
    plus a 95% Poisson-Binomial prediction interval over all confidences.

    ``policies`` holds one (year, segment labels) entry per policy.
    """
    by_year: dict[int, list[dict[Label, float]]] = defaultdict(list)
    for year, segs in policies:
        by_year[year].append(policy_label_probs(segs))
    out = []
    for year in sorted(by_year):
        probs_list = by_year[year]
        for lab in labels:
            probs = np.array([pp.get(lab, 0.0) for pp in probs_list])
            dist = poisson_binomial(probs)
            lo, hi = prediction_interval(dist)
            out.append(LabelFraction(year, lab, len(probs), int((probs > threshold).sum()),
                                     dist.mean, lo, hi))
    return out
