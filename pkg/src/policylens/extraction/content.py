"""Main-text extraction from policy pages.

Two independent extractors run on every page: a reader-mode-style scorer
that picks the densest text container, and a pruning extractor that deletes
navigation, headers, footers and non-content elements.  The longer result
wins.
"""
from __future__ import annotations

import re

from bs4 import BeautifulSoup, Comment, NavigableString, Tag

INVISIBLE_TAGS = ("script", "style", "noscript", "template", "head", "title", "meta",
                  "link", "svg", "canvas", "iframe", "object", "embed")
PRUNED_TAGS = ("nav", "header", "footer", "aside", "form", "button", "select",
               "input", "textarea", "menu", "dialog")
BLOCK_TAGS = frozenset(
    "address article aside blockquote body br dd details div dl dt fieldset figcaption "
    "figure footer form h1 h2 h3 h4 h5 h6 header hr li main nav ol p pre section table "
    "tbody td tfoot th thead tr ul".split()
)

_JUNK = re.compile(
    r"(^|[-_\s])(nav|navbar|navigation|menu|breadcrumbs?|header|footer|masthead|sidebar|"
    r"share|social|advert|ads|banner|skip-link|topbar)([-_\s]|$)",
    re.I,
)
_POSITIVE = re.compile(r"article|body|content|entry|main|post|text|policy|privacy|legal|terms", re.I)
_NEGATIVE = re.compile(
    r"nav|menu|footer|header|sidebar|comment|share|social|sponsor|advert|promo|related|"
    r"breadcrumb|masthead|widget|banner|login|signup",
    re.I,
)


def _soup(html: str | bytes) -> BeautifulSoup:
    return BeautifulSoup(html, "html.parser")


def _drop_invisible(root: Tag) -> None:
    for el in root.find_all(INVISIBLE_TAGS):
        el.decompose()
    for c in root.find_all(string=lambda s: isinstance(s, Comment)):
        c.extract()


def render_text(node: Tag) -> str:
    """Text of ``node`` with one line per block element, whitespace
    collapsed inside lines."""
    parts: list[str] = []

    def walk(el):
        for child in el.children:
            if isinstance(child, Comment):
                continue
            if isinstance(child, NavigableString):
                parts.append(str(child))
            elif isinstance(child, Tag):
                block = child.name in BLOCK_TAGS
                if block:
                    parts.append("\n")
                walk(child)
                if block:
                    parts.append("\n")

    walk(node)
    lines = (" ".join(line.split()) for line in "".join(parts).split("\n"))
    return "\n".join(line for line in lines if line)


def visible_text(html: str | bytes) -> str:
    soup = _soup(html)
    _drop_invisible(soup)
    return render_text(soup)


def _class_id(el: Tag) -> str:
    cls = el.get("class") or []
    if isinstance(cls, str):
        cls = [cls]
    return " ".join([*cls, el.get("id") or ""])


def extract_pruned(html: str | bytes) -> str:
    """Strip scripts, navigation, headers, footers and boilerplate-labelled
    containers; return what remains."""
    soup = _soup(html)
    _drop_invisible(soup)
    for el in soup.find_all(PRUNED_TAGS):
        el.decompose()
    for el in soup.find_all(attrs={"role": re.compile(r"navigation|banner|contentinfo", re.I)}):
        el.decompose()
    for el in list(soup.find_all(True)):
        if el.decomposed:
            continue
        if el.name not in ("html", "body", "main", "article") and _JUNK.search(_class_id(el)):
            el.decompose()
    return render_text(soup)


def _text_len(el: Tag) -> int:
    return len(" ".join(el.get_text(" ", strip=True).split()))


def _link_density(el: Tag) -> float:
    total = _text_len(el)
    if total == 0:
        return 0.0
    links = sum(_text_len(a) for a in el.find_all("a"))
    return links / total


def _class_weight(el: Tag) -> int:
    names = _class_id(el)
    w = 0
    if names.strip():
        if _NEGATIVE.search(names):
            w -= 25
        if _POSITIVE.search(names):
            w += 25
    return w


_TAG_BONUS = {"article": 10, "main": 10, "section": 5, "div": 5, "td": 3, "blockquote": 3,
              "form": -3, "ol": -3, "ul": -3, "li": -3, "h1": -5, "h2": -5, "h3": -5, "th": -5}


def extract_dense(html: str | bytes) -> str:
    """Reader-mode-style extraction: score containers by the paragraphs
    they hold, keep the best one and strong siblings."""
    soup = _soup(html)
    _drop_invisible(soup)
    body = soup.body or soup
    scores: dict[int, float] = {}
    nodes: dict[int, Tag] = {}

    def bump(el: Tag | None, amount: float):
        if el is None or not isinstance(el, Tag):
            return
        key = id(el)
        if key not in scores:
            scores[key] = _TAG_BONUS.get(el.name, 0) + _class_weight(el)
            nodes[key] = el
        scores[key] += amount

    for p in body.find_all(["p", "pre", "td", "li", "blockquote", "dd"]):
        text = " ".join(p.get_text(" ", strip=True).split())
        if len(text) < 25:
            continue
        content = 1 + text.count(",") + min(len(text) // 100, 3)
        bump(p.parent, content)
        if p.parent is not None:
            bump(p.parent.parent, content / 2)
    # divs holding bare text behave like paragraphs
    for div in body.find_all("div"):
        if div.find(list(BLOCK_TAGS - {"br"})) is None:
            text = " ".join(div.get_text(" ", strip=True).split())
            if len(text) >= 25:
                content = 1 + text.count(",") + min(len(text) // 100, 3)
                bump(div, content)
                bump(div.parent, content / 2)

    if not scores:
        return render_text(body) if _text_len(body) else ""
    final = {k: s * (1.0 - _link_density(nodes[k])) for k, s in scores.items()}
    best_key = max(final, key=final.__getitem__)  # ties: first container scored
    best = nodes[best_key]
    threshold = max(10.0, final[best_key] * 0.2)
    keep = []
    parent = best.parent
    siblings = [c for c in parent.children if isinstance(c, Tag)] if parent is not None else [best]
    for sib in siblings:
        if sib is best:
            keep.append(sib)
            continue
        k = id(sib)
        if k in final and final[k] >= threshold:
            keep.append(sib)
        elif sib.name == "p":
            text = sib.get_text(" ", strip=True)
            if len(text) > 80 and _link_density(sib) < 0.25:
                keep.append(sib)
    return "\n".join(t for t in (render_text(k) for k in keep) if t)


def extract_main_text(html: str | bytes) -> str:
    """Run both extractors and keep the text with more words."""
    if not html:
        return ""
    dense = extract_dense(html)
    pruned = extract_pruned(html)
    return dense if len(dense.split()) >= len(pruned.split()) else pruned
