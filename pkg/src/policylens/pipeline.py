"""Crawling landing pages and policy links from the archive, then
extracting, gating and deduplicating policy texts into the corpus store."""
from __future__ import annotations

import json
import logging
import pickle
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Callable, Iterable, Sequence
from urllib.parse import urljoin, urlsplit

from .archive import (
    ArchiveClient,
    ArchiveError,
    CdxEntry,
    SnapshotSchedule,
    build_schedule,
    monthly_picks,
    unwrap_archive_url,
)
from .extraction.content import extract_main_text
from .extraction.gate import GateVerdict, PolicyScorer, gate
from .extraction.links import PolicyLink, find_full_policy_links, find_policy_links
from .extraction.store import CorpusStore, PolicySnapshot, atomic_write, format_ts, parse_ts

log = logging.getLogger(__name__)

INDEX_FILE = "fetched.jsonl"


@dataclass(frozen=True)
class FetchedSnapshot:
    site: str
    link: PolicyLink
    archive_timestamp: datetime
    partial: bool

    def record(self) -> dict:
        return {"site": self.site, "link": self.link.to_dict(),
                "archive_timestamp": format_ts(self.archive_timestamp), "partial": self.partial}

    @classmethod
    def from_record(cls, rec: dict) -> "FetchedSnapshot":
        return cls(rec["site"], PolicyLink(**rec["link"]), parse_ts(rec["archive_timestamp"]),
                   bool(rec.get("partial")))


@dataclass
class SiteResult:
    site: str
    landing_snapshots: int = 0
    policy_links: list[str] = field(default_factory=list)
    fetched: list[FetchedSnapshot] = field(default_factory=list)
    skipped_pdf: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return bool(self.errors) and not self.fetched


def read_sites(path: str | Path) -> list[str]:
    """One domain per line; blank lines and ``#`` comments ignored."""
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line and line not in out:
            out.append(line)
    return out


def landing_url(site: str) -> str:
    return site if "://" in site else f"http://{site}/"


def resolve_link(href: str, page_url: str) -> str | None:
    """Absolute original URL for a link found on an archived page."""
    href = href.strip()
    if not href or href.startswith(("#", "mailto:", "javascript:", "tel:")):
        return None
    inner = unwrap_archive_url(href)
    if inner is not None:
        return inner
    absolute = urljoin(page_url, href)
    return absolute if urlsplit(absolute).scheme in ("http", "https") else None


def _fetch(client: ArchiveClient, store: CorpusStore, entry: CdxEntry, url: str) -> tuple[bytes, bool]:
    res = client.fetch_snapshot(entry)
    store.save_raw(url, entry.archive_timestamp, res.body)
    return res.body, res.partial


def _decode(body: bytes) -> str:
    return body.decode("utf-8", errors="replace")


def crawl_site(
    site: str, client: ArchiveClient, schedule: SnapshotSchedule, store: CorpusStore,
) -> SiteResult:
    result = SiteResult(site)
    home = landing_url(site)
    try:
        landing = build_schedule(schedule, [e for e in client.cdx_list(home) if e.fetchable])
    except ArchiveError as exc:
        result.errors.append(f"landing CDX: {exc}")
        return result
    links: dict[str, PolicyLink] = {}
    for entry in landing:
        try:
            body, _ = _fetch(client, store, entry, home)
        except ArchiveError as exc:
            result.errors.append(f"landing {entry.timestamp14}: {exc}")
            continue
        result.landing_snapshots += 1
        for link in find_policy_links(_decode(body)):
            url = resolve_link(link.href, entry.original_url)
            if url is None:
                continue
            if link.is_pdf:
                if url not in result.skipped_pdf:
                    result.skipped_pdf.append(url)
                continue
            links.setdefault(url, PolicyLink(url, link.anchor_text, link.matched_term))
            break  # highest-priority link of this snapshot

    queue = list(links.values())
    chased: set[str] = set(links)
    for depth in (0, 1):
        next_queue = []
        for link in queue:
            result.policy_links.append(link.href)
            try:
                picks = monthly_picks(e for e in client.cdx_list(link.href) if e.fetchable)
            except ArchiveError as exc:
                result.errors.append(f"policy CDX {link.href}: {exc}")
                continue
            for entry in picks:
                try:
                    body, partial = _fetch(client, store, entry, link.href)
                except ArchiveError as exc:
                    result.errors.append(f"policy {link.href} {entry.timestamp14}: {exc}")
                    continue
                result.fetched.append(FetchedSnapshot(site, link, entry.archive_timestamp, partial))
                if depth == 0:
                    # summaries often link to the complete policy; follow once
                    for full in find_full_policy_links(_decode(body)):
                        url = resolve_link(full.href, entry.original_url)
                        if url is None or url in chased or full.is_pdf:
                            continue
                        chased.add(url)
                        next_queue.append(PolicyLink(url, full.anchor_text, full.matched_term))
        queue = next_queue
    return result


def crawl(
    sites: Sequence[str],
    client: ArchiveClient,
    schedule: SnapshotSchedule,
    store: CorpusStore,
    workers: int = 4,
) -> list[SiteResult]:
    """Fetch every site's landing and policy snapshots; writes the fetch
    index used by :func:`extract`."""
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(lambda s: crawl_site(s, client, schedule, store), sites))
    fetched = sorted(
        (f for r in results for f in r.fetched),
        key=lambda f: (f.site, f.archive_timestamp, f.link.href),
    )
    atomic_write(store.root / INDEX_FILE,
                 "".join(json.dumps(f.record(), sort_keys=True) + "\n" for f in fetched))
    return results


def read_fetch_index(store: CorpusStore) -> list[FetchedSnapshot]:
    path = store.root / INDEX_FILE
    if not path.exists():
        return []
    return [FetchedSnapshot.from_record(json.loads(line))
            for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]


def load_gate_models(models: Iterable) -> list[tuple[PolicyScorer, float]]:
    out = []
    for m in models:
        with open(m.path, "rb") as fh:
            out.append((pickle.load(fh), m.threshold))
    return out


def extract(
    store: CorpusStore,
    classifiers: Sequence[tuple[PolicyScorer, float]] = (),
    *,
    min_words: int = 100,
    workers: int = 4,
    language_detector: Callable | None = None,
) -> list[PolicySnapshot]:
    """Extract, gate and deduplicate every fetched policy snapshot; rewrites
    the unique-text store and snapshots.jsonl."""
    fetched = read_fetch_index(store)
    kwargs = {"min_words": min_words}
    if language_detector is not None:
        kwargs["language_detector"] = language_detector

    def work(f: FetchedSnapshot) -> tuple[str, GateVerdict]:
        raw = store.load_raw(f.link.href, f.archive_timestamp)
        text = extract_main_text(raw) if raw else ""
        return text, gate(text, classifiers, **kwargs)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        outcomes = list(pool.map(work, fetched))
    store.reset_texts()
    snapshots = []
    for f, (text, verdict) in zip(fetched, outcomes):
        ref = None
        if verdict.passed:
            ref = store.dedupe(text, f.archive_timestamp, f.site, flush=False).content_hash
        snapshots.append(PolicySnapshot(f.site, f.link, f.archive_timestamp, ref, verdict))
    store.flush()
    store.write_snapshots(snapshots)
    return snapshots
