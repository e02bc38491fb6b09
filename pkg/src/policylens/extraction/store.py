"""On-disk corpus: deduplicated policy texts plus one record per snapshot.

Layout under the corpus root::

    texts/<hash>.txt     UTF-8 policy text
    raw/<key>.html       fetched HTML, keyed by link and timestamp
    snapshots.jsonl      one PolicySnapshot per line
    uniques.jsonl        one UniquePolicyText (without the text) per line
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator

from .gate import GateVerdict
from .links import PolicyLink

TS_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


def normalize_text(text: str) -> str:
    return " ".join(text.split())


def content_hash(text: str) -> str:
    return hashlib.sha256(normalize_text(text).encode("utf-8")).hexdigest()


def format_ts(ts: datetime) -> str:
    if ts.tzinfo is not None:
        ts = ts.astimezone(timezone.utc).replace(tzinfo=None)
    return ts.strftime(TS_FORMAT)


def parse_ts(value: str) -> datetime:
    return datetime.strptime(value, TS_FORMAT)


def atomic_write(path: Path, data: str | bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"encoding": "utf-8", "newline": ""})) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass(frozen=True)
class UniquePolicyText:
    content_hash: str
    text: str
    first_seen: datetime
    site: str

    def record(self) -> dict:
        return {"content_hash": self.content_hash, "first_seen": format_ts(self.first_seen),
                "site": self.site}


@dataclass(frozen=True)
class PolicySnapshot:
    site: str
    link: PolicyLink
    archive_timestamp: datetime
    text_ref: str | None
    gate: GateVerdict | None

    def record(self) -> dict:
        return {
            "site": self.site,
            "link": self.link.to_dict(),
            "archive_timestamp": format_ts(self.archive_timestamp),
            "text_ref": self.text_ref,
            "gate": self.gate.to_dict() if self.gate else None,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "PolicySnapshot":
        gate = GateVerdict(**rec["gate"]) if rec.get("gate") else None
        return cls(
            site=rec["site"],
            link=PolicyLink(**rec["link"]),
            archive_timestamp=parse_ts(rec["archive_timestamp"]),
            text_ref=rec.get("text_ref"),
            gate=gate,
        )


def raw_key(href: str, ts: datetime) -> str:
    return hashlib.sha256(f"{format_ts(ts)} {href}".encode("utf-8")).hexdigest()[:32]


class CorpusStore:
    """File-backed store; writes are serialized by an internal lock."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.texts_dir = self.root / "texts"
        self.raw_dir = self.root / "raw"
        self._lock = threading.Lock()
        self._uniques: dict[str, dict] = {}
        path = self.root / "uniques.jsonl"
        if path.exists():
            for line in path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    rec = json.loads(line)
                    self._uniques[rec["content_hash"]] = rec

    # -- unique texts -------------------------------------------------------

    def dedupe(self, text: str, timestamp: datetime, site: str, *, flush: bool = True) -> UniquePolicyText:
        """Insert ``text`` or return its existing record, keeping the earliest
        first-seen time.  With ``flush=False`` the index is written by a
        later :meth:`flush`."""
        h = content_hash(text)
        ts = format_ts(timestamp)
        with self._lock:
            rec = self._uniques.get(h)
            if rec is None:
                rec = {"content_hash": h, "first_seen": ts, "site": site}
                self._uniques[h] = rec
                atomic_write(self.texts_dir / f"{h}.txt", text)
            elif ts < rec["first_seen"]:
                rec["first_seen"] = ts
                rec["site"] = site
            if flush:
                self._flush_uniques()
            stored = rec.copy()
        return UniquePolicyText(h, self.text(h), parse_ts(stored["first_seen"]), stored["site"])

    def flush(self) -> None:
        with self._lock:
            self._flush_uniques()

    def _flush_uniques(self) -> None:
        lines = [json.dumps(self._uniques[h], sort_keys=True) for h in sorted(self._uniques)]
        atomic_write(self.root / "uniques.jsonl", "".join(l + "\n" for l in lines))

    def text(self, h: str) -> str:
        return (self.texts_dir / f"{h}.txt").read_text(encoding="utf-8")

    def uniques(self) -> list[UniquePolicyText]:
        return [
            UniquePolicyText(h, self.text(h), parse_ts(r["first_seen"]), r["site"])
            for h, r in sorted(self._uniques.items())
        ]

    def __len__(self) -> int:
        return len(self._uniques)

    # -- snapshots ----------------------------------------------------------

    def snapshots_path(self) -> Path:
        return self.root / "snapshots.jsonl"

    def write_snapshots(self, snapshots: list[PolicySnapshot]) -> None:
        """Replace snapshots.jsonl with ``snapshots`` in a stable order."""
        recs = sorted(
            (s.record() for s in snapshots),
            key=lambda r: (r["site"], r["archive_timestamp"], r["link"]["href"]),
        )
        with self._lock:
            atomic_write(self.snapshots_path(),
                         "".join(json.dumps(r, sort_keys=True) + "\n" for r in recs))

    def snapshots(self) -> Iterator[PolicySnapshot]:
        path = self.snapshots_path()
        if not path.exists():
            return
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                yield PolicySnapshot.from_record(json.loads(line))

    # -- raw html -----------------------------------------------------------

    def save_raw(self, href: str, ts: datetime, body: bytes) -> Path:
        path = self.raw_dir / f"{raw_key(href, ts)}.html"
        with self._lock:
            atomic_write(path, body)
        return path

    def load_raw(self, href: str, ts: datetime) -> bytes | None:
        path = self.raw_dir / f"{raw_key(href, ts)}.html"
        return path.read_bytes() if path.exists() else None

    def reset_texts(self) -> None:
        """Forget all unique texts (used before re-running extraction)."""
        with self._lock:
            for p in self.texts_dir.glob("*.txt"):
                p.unlink()
            self._uniques.clear()
            self._flush_uniques()
