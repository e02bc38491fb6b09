"""Command-line entry point: one subcommand per pipeline stage.

Exit codes: 0 success, 1 partial results or an empty corpus, 2 a
configuration problem (bad option, unknown term, missing model bundle).
"""
from __future__ import annotations

import dataclasses
import functools
import json
import logging
import pickle
import sys
from collections import defaultdict
from pathlib import Path

import click

from . import analysis
from .archive import ArchiveClient
from .classify import (
    ModelBundle,
    UntrainedBundleError,
    consolidate_all,
    convert_opp115,
    dedup_labels,
    first_mention,
    label_segments,
    load_schema,
    read_annotations,
    run_protocol,
    train_hierarchy,
)
from .classify.hierarchy import SegmentLabels
from .classify.schema import Label
from .config import ConfigError, RunConfig, load_config
from .extraction.gate import PolicyClassifier
from .extraction.store import CorpusStore, atomic_write
from .pipeline import crawl, extract, load_gate_models, read_sites
from .segment import EmbeddingTable, segment, train_embeddings
from .terms import load_terms, term_series
from .text.difficulty import load_familiar_words
from .text.readability import annual_reading_hours
from .text.wordlists import WordListError, default_obfuscating_words, load_word_list

log = logging.getLogger("policylens")

EXIT_OK, EXIT_PARTIAL, EXIT_CONFIG = 0, 1, 2
SEGMENTS_FILE = "segments.jsonl"
EMBEDDINGS_FILE = "embeddings.txt"
EVALUATION_FILE = "evaluation.json"


class Partial(Exception):
    """Finished, but with missing pieces; maps to exit code 1."""


# -- option plumbing -------------------------------------------------------------

_OPTIONS = [
    click.option("--config", "config_path", type=click.Path(dir_okay=False), help="YAML run config."),
    click.option("--corpus", type=click.Path(file_okay=False), help="Corpus directory."),
    click.option("--sites", type=click.Path(dir_okay=False), help="Site list, one domain per line."),
    click.option("--archive-url", help="Archive base URL."),
    click.option("--workers", type=int, help="Worker threads per stage."),
    click.option("--timeout", type=float, help="Per-snapshot fetch timeout in seconds."),
    click.option("--min-delay", type=float, help="Minimum delay between requests to one host."),
    click.option("--max-retries", type=int),
    click.option("--min-words", type=int, help="Word minimum for a policy text."),
    click.option("--familiar-words", type=click.Path(dir_okay=False), help="Dale-Chall familiar list."),
    click.option("--obfuscating-words", type=click.Path(dir_okay=False)),
    click.option("--terms", type=click.Path(dir_okay=False), help="Term config (JSON)."),
    click.option("--include-dc/--no-include-dc", default=None),
    click.option("--embeddings", type=click.Path(dir_okay=False), help="Word-vector table."),
    click.option("--segment-threshold", type=float),
    click.option("--min-segment-size", type=int),
    click.option("--annotations", type=click.Path(), help="Annotated segments (CSV or OPP-115 dir)."),
    click.option("--annotations-format", type=click.Choice(["csv", "opp115"])),
    click.option("--label-threshold", type=float),
    click.option("--min-precision", type=float),
    click.option("--bundle", type=click.Path(file_okay=False), help="Model bundle directory."),
    click.option("--seed", type=int),
]


def run_command(fn):
    """Attach the shared options, build the config, and map errors to exit codes."""

    @functools.wraps(fn)
    def wrapper(config_path, **kwargs):
        names = {f.name for f in dataclasses.fields(RunConfig)}
        overrides = {k: kwargs.pop(k) for k in list(kwargs) if k in names}
        try:
            cfg = load_config(config_path, overrides)
            fn(cfg, **kwargs)
        except (ConfigError, UntrainedBundleError, WordListError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)
        except Partial as exc:
            click.echo(f"incomplete: {exc}", err=True)
            sys.exit(EXIT_PARTIAL)

    for opt in reversed(_OPTIONS):
        wrapper = opt(wrapper)
    return wrapper


def _write(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    atomic_write(path, text)
    return path


def _write_json(path: Path, obj) -> Path:
    return _write(path, json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n")


def _store(cfg: RunConfig) -> CorpusStore:
    return CorpusStore(cfg.corpus)


def _view(cfg: RunConfig) -> analysis.CorpusView:
    if not (Path(cfg.corpus) / "snapshots.jsonl").exists():
        raise Partial(f"no corpus at {cfg.corpus} (run `policylens crawl` first)")
    view = analysis.corpus_view(_store(cfg))
    if not view.uniques:
        raise Partial(f"corpus at {cfg.corpus} holds no policy texts")
    return view


def _counting(cfg: RunConfig):
    counting = cfg.counting_config()
    if cfg.familiar_words is not None:
        counting = dataclasses.replace(counting, familiar_words=load_familiar_words(cfg.require("familiar_words")))
    elif cfg.include_dc:
        raise ConfigError("include_dc needs a familiar_words list")
    return counting


def _obfuscating(cfg: RunConfig) -> list[str]:
    if cfg.obfuscating_words is None:
        return list(default_obfuscating_words())
    return load_word_list(cfg.require("obfuscating_words"))


def _terms(cfg: RunConfig):
    try:
        return load_terms(cfg.require("terms") if cfg.terms is not None else None)
    except ValueError as exc:
        raise ConfigError(f"terms: {exc}") from exc


@click.group()
@click.option("-v", "--verbose", count=True, help="More logging (repeatable).")
def main(verbose: int):
    """Longitudinal analysis of archived website privacy policies."""
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


# -- crawl / extract -------------------------------------------------------------


def _run_extract(cfg: RunConfig, store: CorpusStore) -> int:
    classifiers = load_gate_models(cfg.gate_models)
    snaps = extract(store, classifiers, min_words=cfg.min_words, workers=cfg.workers)
    kept = sum(1 for s in snaps if s.text_ref)
    click.echo(f"extracted {len(snaps)} snapshots: {kept} passed the gate, {len(store)} unique texts")
    return len(store)


@main.command("crawl")
@click.option("--no-extract", is_flag=True, help="Only fetch; skip extraction.")
@run_command
def cmd_crawl(cfg: RunConfig, no_extract: bool):
    """Fetch landing pages and policy snapshots for every listed site."""
    sites = read_sites(cfg.require("sites"))
    if not sites:
        click.echo("site list is empty; nothing to do")
        return
    store = _store(cfg)
    with ArchiveClient(cfg.archive_url, cfg.fetch_policy()) as client:
        results = crawl(sites, client, cfg.schedule(), store, cfg.workers)
    failed = 0
    for r in results:
        status = "FAILED" if r.failed else "ok"
        click.echo(f"{r.site}: {status}, {r.landing_snapshots} landing snapshots, "
                   f"{len(r.policy_links)} policy links, {len(r.fetched)} policy snapshots, "
                   f"{len(r.errors)} errors")
        for err in r.errors:
            click.echo(f"  {err}", err=True)
        failed += r.failed
    unique = None if no_extract else _run_extract(cfg, store)
    if failed:
        raise Partial(f"{failed} of {len(results)} sites failed")
    if unique == 0:
        raise Partial("no policy text survived extraction")


@main.command("extract")
@run_command
def cmd_extract(cfg: RunConfig):
    """Re-run extraction, gating and deduplication over fetched snapshots."""
    if _run_extract(cfg, _store(cfg)) == 0:
        raise Partial("no policy text survived extraction")


# -- metrics / terms -------------------------------------------------------------


def _metrics(cfg: RunConfig, view: analysis.CorpusView) -> list[dict]:
    rows = analysis.metric_rows(view, _counting(cfg), _obfuscating(cfg), cfg.include_dc)
    out = cfg.reports_dir
    _write(out / "metrics.csv", analysis.metrics_csv(rows))
    by_hash = {r["content_hash"]: r for r in rows}
    for metric in analysis.SERIES_METRICS + (("dc",) if cfg.include_dc else ()):
        series = analysis.metric_series(view, by_hash, metric)
        _write(out / f"series_{metric}.csv",
               analysis.to_csv(analysis.SERIES_HEADER, analysis.series_rows(series)))
    words = analysis.metric_series(view, by_hash, "words")
    _write(out / "reading_time.csv", analysis.to_csv(
        ("month", "mean_words", "minutes_per_policy", "annual_hours", "n"),
        ((m, s.mean, s.mean / 250.0, annual_reading_hours(s.mean), s.n) for m, s in words.items()),
    ))
    _write(out / "policies_per_year.csv", analysis.to_csv(
        ("year", "snapshots", "new_unique_texts"), analysis.policies_per_year(_store(cfg), view)))
    return rows


@main.command("metrics")
@run_command
def cmd_metrics(cfg: RunConfig):
    """Per-policy length, readability, obfuscation and passive-voice metrics
    plus their monthly series."""
    rows = _metrics(cfg, _view(cfg))
    click.echo(f"wrote metrics for {len(rows)} unique policies to {cfg.reports_dir}")


def _term_reports(cfg: RunConfig, view: analysis.CorpusView, only: tuple[str, ...] = ()) -> None:
    terms = _terms(cfg)
    if only:
        known = {t.canonical_name: t for t in terms}
        missing = [n for n in only if n not in known]
        if missing:
            raise ConfigError(f"unknown term(s) {missing}; known: {sorted(known)}")
        terms = [known[n] for n in only]
    series = term_series(view.active, view.texts, terms)
    rows = [row for name, s in series.items() for row in analysis.series_rows(s, (name,))]
    _write(cfg.reports_dir / "term_series.csv", analysis.to_csv(("term", *analysis.SERIES_HEADER), rows))
    _write(cfg.reports_dir / "update_rate.csv",
           analysis.to_csv(("month", "update_rate", "n_sites"), analysis.update_rows(view)))


@main.command("terms")
@click.option("--term", "only", multiple=True, help="Restrict to these canonical term names.")
@run_command
def cmd_terms(cfg: RunConfig, only: tuple[str, ...]):
    """Monthly fraction of policies mentioning each term, and the update rate."""
    _term_reports(cfg, _view(cfg), only)
    click.echo(f"wrote term and update-rate series to {cfg.reports_dir}")


@main.command("compare")
@click.option("--term", required=True, help="Canonical term defining the cohorts.")
@click.option("--before", required=True, help="Earlier month, YYYY-MM.")
@click.option("--after", required=True, help="Later month, YYYY-MM.")
@click.option("--metric", default="words", show_default=True, help="Metric column to compare.")
@run_command
def cmd_compare(cfg: RunConfig, term: str, before: str, after: str, metric: str):
    """Welch test and Cohen's d of a metric between two months, per cohort."""
    known = {t.canonical_name: t for t in _terms(cfg)}
    if term not in known:
        raise ConfigError(f"unknown term {term!r}; known: {sorted(known)}")
    if metric not in analysis.METRIC_COLUMNS[3:]:
        raise ConfigError(f"unknown metric {metric!r}")
    view = _view(cfg)
    path = cfg.reports_dir / "metrics.csv"
    rows = (analysis.read_metrics_csv(path.read_text(encoding="utf-8")) if path.exists()
            else {r["content_hash"]: r for r in _metrics(cfg, view)})
    values = {h: float(r[metric]) for h, r in rows.items() if r[metric] not in ("", None)}
    if set(view.uniques) - set(rows):
        raise ConfigError("metrics.csv is stale; rerun `policylens metrics`")
    result = analysis.compare_cohorts(view, values, known[term], before, after)
    result["metric"] = metric
    _write_json(cfg.reports_dir / f"compare_{metric}_{before}_{after}.json", result)
    click.echo(json.dumps(result, indent=2, sort_keys=True))


# -- segmentation / classification -------------------------------------------------


def _embeddings(cfg: RunConfig, view: analysis.CorpusView) -> EmbeddingTable:
    if cfg.embeddings is not None and Path(cfg.embeddings).exists():
        return EmbeddingTable.load(cfg.embeddings)
    target = Path(cfg.embeddings) if cfg.embeddings is not None else Path(cfg.corpus) / EMBEDDINGS_FILE
    texts = [view.uniques[h].text for h in sorted(view.uniques)]
    emb = train_embeddings(texts, cfg.embedding_dimension, cfg.embedding_min_count, seed=cfg.seed)
    tmp = target.with_suffix(target.suffix + ".tmp")
    emb.save(tmp)
    tmp.replace(target)
    click.echo(f"trained {len(emb)} word vectors -> {target}")
    return emb


@main.command("segment")
@run_command
def cmd_segment(cfg: RunConfig):
    """Split every unique policy into topical segments."""
    view = _view(cfg)
    emb = _embeddings(cfg, view)
    lines = []
    for h in sorted(view.uniques):
        for seg in segment(view.uniques[h].text, emb, cfg.segment_threshold, cfg.min_segment_size,
                           policy_ref=h):
            lines.append(json.dumps(seg.to_dict(), sort_keys=True))
    _write(Path(cfg.corpus) / SEGMENTS_FILE, "".join(l + "\n" for l in lines))
    click.echo(f"wrote {len(lines)} segments for {len(view.uniques)} policies")


def _read_texts(folder: Path) -> list[str]:
    return [p.read_text(encoding="utf-8", errors="replace") for p in sorted(folder.glob("*.txt"))]


@main.command("train")
@click.option("--gate-policies", type=click.Path(file_okay=False, exists=True),
              help="Folder of *.txt policies; trains a gate model instead of the labeler.")
@click.option("--gate-others", type=click.Path(file_okay=False, exists=True),
              help="Folder of *.txt non-policy texts for the gate model.")
@click.option("--gate-out", type=click.Path(dir_okay=False), help="Where to pickle the gate model.")
@run_command
def cmd_train(cfg: RunConfig, gate_policies, gate_others, gate_out):
    """Train the segment labeler (or, with --gate-*, a policy-text gate model)."""
    if gate_policies or gate_others or gate_out:
        if not (gate_policies and gate_others and gate_out):
            raise ConfigError("--gate-policies, --gate-others and --gate-out go together")
        model = PolicyClassifier(cfg.seed).fit(_read_texts(Path(gate_policies)), _read_texts(Path(gate_others)))
        out = Path(gate_out)
        out.parent.mkdir(parents=True, exist_ok=True)
        atomic_write(out, pickle.dumps(model))
        click.echo(f"wrote gate model to {out}")
        return

    path = cfg.require("annotations")
    schema = load_schema()
    raw = convert_opp115(path) if cfg.annotations_format == "opp115" else read_annotations(path)
    segments = consolidate_all(raw, schema)
    if not segments:
        raise ConfigError(f"no annotated segments in {path}")
    result = run_protocol(segments, schema, threshold=cfg.label_threshold, seed=cfg.seed)
    bundle = train_hierarchy(segments, schema, seed=cfg.seed)
    bundle.save(cfg.bundle_dir)
    report = {
        "top": result.top.to_dict(),
        "attributes": {a: r.to_dict() for a, r in result.attributes.items()},
        "attributes_pooled": result.attributes_pooled.to_dict() if result.attributes_pooled else None,
        "untrainable": result.untrainable,
        "segments": len(segments),
        "label_precision": sorted(
            [*lab, s.precision] for r in [result.top, *result.attributes.values()]
            for lab, s in r.per_label.items()
        ),
    }
    _write_json(cfg.bundle_dir / EVALUATION_FILE, report)
    click.echo(f"top-level micro-F1 {result.top.micro_f1:.3f}; "
               f"attribute micro-F1 {result.attributes_pooled.micro_f1 if result.attributes_pooled else float('nan'):.3f}; "
               f"bundle -> {cfg.bundle_dir}")


def _low_precision(bundle_dir: Path, min_precision: float) -> set[Label]:
    """Labels whose held-out precision is below ``min_precision`` or undefined."""
    path = bundle_dir / EVALUATION_FILE
    if not path.exists():
        return set()
    report = json.loads(path.read_text(encoding="utf-8"))
    return {Label(level, name, value) for level, name, value, p in report["label_precision"]
            if p is None or p < min_precision}


@main.command("label")
@run_command
def cmd_label(cfg: RunConfig):
    """Label every segment, then derive first mentions and per-year fractions."""
    bundle = ModelBundle.load(cfg.bundle_dir)
    seg_path = Path(cfg.corpus) / SEGMENTS_FILE
    if not seg_path.exists():
        raise ConfigError(f"no segments at {seg_path} (run `policylens segment` first)")
    view = _view(cfg)
    schema = bundle.schema
    t = cfg.label_threshold
    excluded = set(schema.excluded) | _low_precision(cfg.bundle_dir, cfg.min_precision)

    by_policy: dict[str, list[dict]] = defaultdict(list)
    for line in seg_path.read_text(encoding="utf-8").splitlines():
        if line.strip():
            rec = json.loads(line)
            by_policy[rec["policy_ref"]].append(rec)
    labeled: dict[str, list[SegmentLabels]] = {}
    out_lines = []
    for h in sorted(by_policy):
        recs = sorted(by_policy[h], key=lambda r: r["index"])
        probs = label_segments([r["text"] for r in recs], bundle, t)
        kept = dedup_labels(probs, t, excluded)
        labeled[h] = kept
        kept_ids = {id(p) for p in kept}
        for rec, p in zip(recs, probs):
            out_lines.append(json.dumps({
                "policy_ref": h, "index": rec["index"], "duplicate": id(p) not in kept_ids,
                "labels": sorted(list(l) for l in p.labels(t, excluded)), **p.to_dict(),
            }, sort_keys=True))
    _write(cfg.reports_dir / "labels.jsonl", "".join(l + "\n" for l in out_lines))

    def policy_labels(h: str) -> frozenset:
        return frozenset().union(*(s.labels(t, excluded) for s in labeled.get(h, [])))

    timeline = [(site, month, policy_labels(h))
                for site, months in view.timelines.items() for month, h in months.items()]
    firsts = first_mention(timeline)
    _write(cfg.reports_dir / "first_mention.csv", analysis.to_csv(
        ("site", "level", "name", "value", "first_month"),
        sorted((site, *lab, month) for site, per in firsts.items() for lab, month in per.items()),
    ))

    reportable = [l for l in schema.all_labels() if l not in excluded]
    entries = [(year, labeled.get(h, [])) for year, _, h in analysis.yearly_policies(view)]
    fractions = analysis.label_fractions(entries, reportable, t)
    _write(cfg.reports_dir / "label_fractions.csv",
           analysis.to_csv(analysis.LABEL_FRACTION_HEADER, (f.row() for f in fractions)))
    _write(cfg.reports_dir / "excluded_labels.csv",
           analysis.to_csv(("level", "name", "value"), sorted(tuple(l) for l in excluded)))
    missing = sorted(set(view.uniques) - set(by_policy))
    click.echo(f"labeled {len(out_lines)} segments of {len(by_policy)} policies; "
               f"{len(excluded)} labels excluded")
    if missing:
        raise Partial(f"{len(missing)} policies have no segments; rerun `policylens segment`")


# -- report ---------------------------------------------------------------------


@main.command("report")
@run_command
def cmd_report(cfg: RunConfig):
    """Regenerate every corpus report and a summary JSON."""
    view = _view(cfg)
    rows = _metrics(cfg, view)
    _term_reports(cfg, view)
    words = [r["words"] for r in rows]
    summary = {
        "sites": len(view.timelines),
        "snapshots_with_text": view.snapshot_count,
        "unique_policies": len(view.uniques),
        "months": [min(view.active), max(view.active)] if view.active else [],
        "mean_words": sum(words) / len(words),
    }
    _write_json(cfg.reports_dir / "summary.json", summary)
    click.echo(json.dumps(summary, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
