"""Key-term mention tracking (acronyms and long forms) over policy texts."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .stats.series import MonthlySeries, monthly_series

ACRONYM_MAX_LEN = 5


@dataclass(frozen=True)
class TermSpec:
    canonical_name: str
    patterns: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "patterns", tuple(self.patterns))
        if not self.patterns:
            raise ValueError(f"term {self.canonical_name!r} needs at least one pattern")
        for p in self.patterns:
            if not p or p != p.lower():
                raise ValueError(f"term patterns must be non-empty and lowercase: {p!r}")

    @cached_property
    def _regex(self) -> re.Pattern:
        parts = []
        for p in self.patterns:
            if len(p) <= ACRONYM_MAX_LEN:
                parts.append(rf"(?<![a-z0-9]){re.escape(p)}(?![a-z0-9])")
            else:
                parts.append(re.escape(p))
        return re.compile("|".join(parts))


def mentions(text: str, term: TermSpec) -> bool:
    """True if any of the term's patterns occurs in ``text``.

    Short patterns (acronyms) must stand alone as words; longer ones match
    anywhere.
    """
    return term._regex.search(text.lower()) is not None


def terms_from_mapping(mapping: Mapping[str, Iterable[str]]) -> list[TermSpec]:
    return [TermSpec(name, tuple(pats)) for name, pats in mapping.items()]


def load_terms(path: str | Path | None = None) -> list[TermSpec]:
    """Term config: JSON object of canonical name -> list of patterns.
    Without a path the packaged default set is used."""
    if path is None:
        raw = resources.files("policylens.data").joinpath("terms.json").read_text("utf-8")
    else:
        raw = Path(path).read_text(encoding="utf-8")
    data = json.loads(raw)
    if not isinstance(data, dict):
        raise ValueError("term config must be a JSON object")
    return terms_from_mapping(data)


def term_series(
    active: Mapping[str, Mapping[str, str]],
    texts: Mapping[str, str],
    terms: Iterable[TermSpec],
) -> dict[str, MonthlySeries]:
    """Per term, the monthly fraction of active policies that mention it.

    ``active`` maps month -> site -> content hash of the policy in force;
    ``texts`` maps content hash -> text.  The fraction is the series mean.
    """
    terms = list(terms)
    cache: dict[tuple[str, str], bool] = {}

    def hit(h: str, t: TermSpec) -> bool:
        key = (h, t.canonical_name)
        if key not in cache:
            cache[key] = mentions(texts[h], t)
        return cache[key]

    out = {}
    for t in terms:
        obs = [(month, 1.0 if hit(h, t) else 0.0)
               for month in sorted(active) for h in active[month].values()]
        out[t.canonical_name] = monthly_series(obs)
    return out
