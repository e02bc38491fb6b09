"""Locating privacy-policy links in landing pages and policy pages."""
from __future__ import annotations

from dataclasses import dataclass

from bs4 import BeautifulSoup

POLICY_TERMS = (
    "privacy polic",
    "privacy",
    "terms of service",
    "web policies",
    "cookie polic",
    "data polic",
    "legal",
)
FULL_POLICY_TERMS = ("privacy statement", "privacy polic", "privacy notice", "privacy")
FULL_MARKERS = ("full", "entire", "complete")


@dataclass(frozen=True)
class PolicyLink:
    href: str
    anchor_text: str
    matched_term: str

    @property
    def is_pdf(self) -> bool:
        return self.href.lower().split("?", 1)[0].split("#", 1)[0].endswith(".pdf")

    def to_dict(self) -> dict:
        return {"href": self.href, "anchor_text": self.anchor_text, "matched_term": self.matched_term}


def _anchors(html: str) -> list[tuple[str, str]]:
    try:
        soup = BeautifulSoup(html, "html.parser")
    except Exception:  # noqa: BLE001 - tolerate anything the parser rejects
        return []
    out = []
    for a in soup.find_all("a", href=True):
        title = " ".join(a.get_text(" ", strip=True).split())
        attr_title = a.get("title") or ""
        if attr_title:
            title = f"{title} {attr_title}".strip()
        out.append((a["href"].strip(), title))
    return out


def find_policy_links(html: str, terms=POLICY_TERMS) -> list[PolicyLink]:
    """Links whose title or URL contains one of ``terms``.

    Terms are tried in priority order, and for each term the page's links
    are scanned from last to first (policy links usually live in footers).
    Each href is reported once, with the highest-priority term it matched.
    """
    anchors = _anchors(html)
    found: list[PolicyLink] = []
    seen: set[str] = set()
    for term in terms:
        for href, title in reversed(anchors):
            if href in seen:
                continue
            if term in title.lower() or term in href.lower():
                seen.add(href)
                found.append(PolicyLink(href, title, term))
    return found


def find_full_policy_links(policy_html: str) -> list[PolicyLink]:
    """Links inside a policy page that likely lead to the complete policy."""
    found = []
    for href, title in _anchors(policy_html):
        t = title.lower()
        subject = "privacy" if "privacy" in t else "policy" if "policy" in t else None
        marker = next((m for m in FULL_MARKERS if m in t), None)
        if subject and marker:
            matched = f"{subject}+{marker}"
        else:
            matched = next((term for term in FULL_POLICY_TERMS if term in t), None)
        if matched:
            found.append(PolicyLink(href, title, matched))
    return found
