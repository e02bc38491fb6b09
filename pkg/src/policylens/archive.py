"""Wayback Machine CDX queries, snapshot scheduling and polite fetching."""
from __future__ import annotations

import logging
import re
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime
from typing import Callable, Iterable
from urllib.parse import urlsplit

import httpx

log = logging.getLogger(__name__)

DEFAULT_BASE_URL = "http://web.archive.org"
CDX_TS_FORMAT = "%Y%m%d%H%M%S"


class ArchiveError(Exception):
    pass


class RetryableError(ArchiveError):
    """Network failure or server error that persisted through all retries."""


class PermanentMissingError(ArchiveError):
    """The archive has no usable copy (404 or another non-retryable status)."""


@dataclass(frozen=True)
class SnapshotSchedule:
    """Sampling density over time: one capture per year, then per quarter,
    then per month."""

    yearly_range: tuple[int, int] = (1996, 2008)
    quarterly_range: tuple[int, int] = (2009, 2017)
    monthly_start: tuple[int, int] = (2018, 1)

    def __post_init__(self):
        y0, y1 = self.yearly_range
        q0, q1 = self.quarterly_range
        if y0 > y1 or q0 > q1:
            raise ValueError("schedule ranges must be ordered (start <= end)")
        if q0 <= y1:
            raise ValueError("quarterly range must start after the yearly range")
        if self.monthly_start <= (q1, 12):
            raise ValueError("monthly sampling must start after the quarterly range")
        if not 1 <= self.monthly_start[1] <= 12:
            raise ValueError(f"bad month in monthly_start: {self.monthly_start}")

    def bucket(self, ts: datetime) -> tuple | None:
        """Sampling bucket of ``ts``; None outside every range."""
        y0, y1 = self.yearly_range
        q0, q1 = self.quarterly_range
        if y0 <= ts.year <= y1:
            return ("Y", ts.year)
        if q0 <= ts.year <= q1:
            return ("Q", ts.year, (ts.month - 1) // 3 + 1)
        if (ts.year, ts.month) >= self.monthly_start:
            return ("M", ts.year, ts.month)
        return None


@dataclass(frozen=True)
class CdxEntry:
    original_url: str
    archive_timestamp: datetime
    status_code: int
    digest: str

    def __post_init__(self):
        if not 100 <= self.status_code <= 599:
            raise ValueError(f"status code {self.status_code} outside 100..599")

    @property
    def timestamp14(self) -> str:
        return self.archive_timestamp.strftime(CDX_TS_FORMAT)

    @property
    def fetchable(self) -> bool:
        return self.status_code == 200 or 300 <= self.status_code < 400


@dataclass(frozen=True)
class FetchPolicy:
    timeout: float = 120.0
    min_delay_between_requests: float = 1.0
    max_retries: int = 3
    backoff_base: float = 1.0

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.min_delay_between_requests < 0:
            raise ValueError("min_delay_between_requests must be >= 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


@dataclass(frozen=True)
class FetchResult:
    entry: CdxEntry
    body: bytes
    partial: bool
    final_url: str = ""


def parse_cdx_timestamp(value: str) -> datetime:
    if not re.fullmatch(r"\d{14}", value):
        raise ValueError(f"not a 14-digit CDX timestamp: {value!r}")
    return datetime.strptime(value, CDX_TS_FORMAT)


def _pick_per_bucket(entries: Iterable[CdxEntry], key: Callable[[datetime], object]) -> list[CdxEntry]:
    chosen: dict[object, CdxEntry] = {}
    for e in entries:
        b = key(e.archive_timestamp)
        if b is None:
            continue
        if b not in chosen or e.archive_timestamp < chosen[b].archive_timestamp:
            chosen[b] = e
    return sorted(chosen.values(), key=lambda e: e.archive_timestamp)


def build_schedule(schedule: SnapshotSchedule, available: Iterable[CdxEntry]) -> list[CdxEntry]:
    """Earliest capture in every yearly, quarterly or monthly bucket."""
    return _pick_per_bucket(available, schedule.bucket)


def monthly_picks(available: Iterable[CdxEntry]) -> list[CdxEntry]:
    """Earliest capture in every calendar month."""
    return _pick_per_bucket(available, lambda ts: (ts.year, ts.month))


def parse_cdx_json(payload) -> list[CdxEntry]:
    """Entries from a CDX ``output=json`` response (header row first).

    Rows that lack fields or carry an unparseable timestamp or status are
    skipped with a warning.
    """
    if not payload:
        return []
    header, *rows = payload
    try:
        i_ts = header.index("timestamp")
        i_url = header.index("original")
        i_status = header.index("statuscode")
        i_digest = header.index("digest")
    except (ValueError, AttributeError) as exc:
        raise ArchiveError(f"unexpected CDX header: {header!r}") from exc
    out = []
    for n, row in enumerate(rows, start=1):
        try:
            out.append(CdxEntry(
                original_url=str(row[i_url]),
                archive_timestamp=parse_cdx_timestamp(str(row[i_ts])),
                status_code=int(row[i_status]),
                digest=str(row[i_digest]),
            ))
        except (IndexError, TypeError, ValueError) as exc:
            log.warning("skipping malformed CDX row %d: %r (%s)", n, row, exc)
    out.sort(key=lambda e: e.archive_timestamp)
    return out


class HostThrottle:
    """Serializes requests per host and spaces them by a minimum delay."""

    def __init__(self, min_delay: float, clock=time.monotonic, sleep=time.sleep):
        self.min_delay = min_delay
        self._clock = clock
        self._sleep = sleep
        self._guard = threading.Lock()
        self._locks: dict[str, threading.Lock] = {}
        self._last: dict[str, float] = {}

    def _lock_for(self, host: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(host, threading.Lock())

    def run(self, host: str, fn):
        with self._lock_for(host):
            last = self._last.get(host)
            if last is not None:
                wait = self.min_delay - (self._clock() - last)
                if wait > 0:
                    self._sleep(wait)
            try:
                return fn()
            finally:
                self._last[host] = self._clock()


@dataclass
class ArchiveClient:
    base_url: str = DEFAULT_BASE_URL
    policy: FetchPolicy = field(default_factory=FetchPolicy)
    client: httpx.Client | None = None
    sleep: Callable[[float], None] = time.sleep

    def __post_init__(self):
        self.base_url = self.base_url.rstrip("/")
        self._own_client = self.client is None
        if self.client is None:
            self.client = httpx.Client(follow_redirects=True,
                                       headers={"User-Agent": "policylens/0.1"})
        self.throttle = HostThrottle(self.policy.min_delay_between_requests, sleep=self.sleep)

    def close(self):
        if self._own_client:
            self.client.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    # -- URLs ---------------------------------------------------------------

    @property
    def cdx_endpoint(self) -> str:
        return f"{self.base_url}/cdx/search/cdx"

    def snapshot_url(self, entry: CdxEntry) -> str:
        return f"{self.base_url}/web/{entry.timestamp14}/{entry.original_url}"

    # -- requests -----------------------------------------------------------

    def _with_retries(self, url: str, attempt_fn):
        host = urlsplit(url).netloc
        last_exc: Exception | None = None
        for attempt in range(self.policy.max_retries + 1):
            if attempt:
                self.sleep(self.policy.backoff_base * 2 ** (attempt - 1))
            try:
                return self.throttle.run(host, attempt_fn)
            except RetryableError as exc:
                last_exc = exc
                log.info("retryable failure for %s (attempt %d): %s", url, attempt + 1, exc)
        raise RetryableError(f"{url}: giving up after {self.policy.max_retries} retries: {last_exc}")

    def cdx_list(self, url: str) -> list[CdxEntry]:
        """All captures of ``url`` in timestamp order."""
        if not url:
            raise ValueError("url must be non-empty")
        endpoint = self.cdx_endpoint

        def attempt():
            try:
                resp = self.client.get(endpoint, params={"url": url, "output": "json"},
                                       timeout=self.policy.timeout)
            except httpx.TransportError as exc:
                raise RetryableError(str(exc)) from exc
            if resp.status_code >= 500 or resp.status_code == 429:
                raise RetryableError(f"CDX server returned {resp.status_code}")
            if resp.status_code == 404:
                return None
            if resp.status_code != 200:
                raise ArchiveError(f"CDX server returned {resp.status_code}")
            return resp

        resp = self._with_retries(endpoint, attempt)
        if resp is None or not resp.content.strip():
            return []
        try:
            payload = resp.json()
        except ValueError as exc:
            raise ArchiveError(f"CDX response for {url} is not JSON") from exc
        return parse_cdx_json(payload)

    def fetch_snapshot(self, entry: CdxEntry) -> FetchResult:
        """Body of the archived capture, following archive redirects.

        If the transfer stalls or exceeds the policy timeout, whatever was
        received so far is returned with ``partial=True``.
        """
        if not entry.fetchable:
            raise PermanentMissingError(f"capture status {entry.status_code} is not fetchable")
        url = self.snapshot_url(entry)
        timeout = self.policy.timeout

        def attempt():
            chunks: list[bytes] = []
            started = time.monotonic()
            try:
                with self.client.stream("GET", url, timeout=timeout) as resp:
                    if resp.status_code in (404, 410):
                        raise PermanentMissingError(f"{url}: {resp.status_code}")
                    if resp.status_code >= 500 or resp.status_code == 429:
                        raise RetryableError(f"{url}: {resp.status_code}")
                    if resp.status_code >= 400:
                        raise PermanentMissingError(f"{url}: {resp.status_code}")
                    final = str(resp.url)
                    try:
                        for chunk in resp.iter_raw():
                            chunks.append(chunk)
                            if time.monotonic() - started > timeout:
                                return FetchResult(entry, b"".join(chunks), True, final)
                    except (httpx.ReadTimeout, httpx.RemoteProtocolError, httpx.ReadError):
                        if chunks:
                            return FetchResult(entry, b"".join(chunks), True, final)
                        raise
                    return FetchResult(entry, b"".join(chunks), False, final)
            except httpx.TransportError as exc:
                raise RetryableError(str(exc)) from exc

        return self._with_retries(url, attempt)


def cdx_list(url: str, *, base_url: str = DEFAULT_BASE_URL, policy: FetchPolicy | None = None) -> list[CdxEntry]:
    with ArchiveClient(base_url, policy or FetchPolicy()) as client:
        return client.cdx_list(url)


def fetch_snapshot(entry: CdxEntry, policy: FetchPolicy, *, base_url: str = DEFAULT_BASE_URL) -> FetchResult:
    with ArchiveClient(base_url, policy) as client:
        return client.fetch_snapshot(entry)


_WAYBACK_PREFIX = re.compile(r"^(?:https?://[^/]+)?/web/\d{1,14}[a-z_]*/(.+)$")


def unwrap_archive_url(href: str) -> str | None:
    """Original URL inside an archive-rewritten link, or None."""
    m = _WAYBACK_PREFIX.match(href)
    if not m:
        return None
    inner = m.group(1)
    if re.match(r"^https?:/[^/]", inner):  # collapsed double slash
        inner = inner.replace(":/", "://", 1)
    return inner
