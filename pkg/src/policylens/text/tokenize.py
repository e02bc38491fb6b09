"""Word and sentence segmentation shared by the metrics, the segmenter and the
update-rate analysis."""
from __future__ import annotations

import re

# alphanumeric runs, joined by apostrophes, periods or hyphens inside a word
WORD_RE = re.compile(r"[^\W_]+(?:['’.\-][^\W_]+)*")

ABBREVIATIONS = frozenset(
    """
    e.g i.e etc vs cf mr mrs ms dr prof inc ltd co corp llc st jr sr no nos
    dept fig approx a.m p.m u.s u.k e.u jan feb mar apr jun jul aug sep sept
    oct nov dec art sec para ca al
    """.split()
)

_TERMINAL_RE = re.compile(r"[.!?]+[\"'”’)\]]*(?=\s)")
_NAIVE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")


def words(text: str) -> list[str]:
    return WORD_RE.findall(text)


def whitespace_tokens(text: str) -> list[str]:
    return text.split()


def _is_boundary(line: str, end: int, next_start: int) -> bool:
    """Decide whether the terminal punctuation ending at ``end`` closes a
    sentence."""
    before = line[:end].rstrip(".!?\"'”’)]")
    last = before.split()[-1] if before.split() else ""
    punct = line[len(before):end]
    if "." in punct and "!" not in punct and "?" not in punct:
        token = last.lower().rstrip(".")
        if token in ABBREVIATIONS:
            return False
        if len(last) == 1 and last.isalpha() and last.isupper():
            return False  # an initial, as in "J. Smith"
    nxt = line[next_start:next_start + 1]
    if nxt and nxt.islower():
        return False
    return True


def split_line(line: str) -> list[str]:
    out = []
    start = 0
    for m in _TERMINAL_RE.finditer(line):
        end = m.end()
        nxt = end
        while nxt < len(line) and line[nxt].isspace():
            nxt += 1
        if _is_boundary(line, end, nxt):
            out.append(line[start:end].strip())
            start = nxt
    tail = line[start:].strip()
    if tail:
        out.append(tail)
    return out


def sentences(text: str) -> list[str]:
    """Canonical sentence split.

    Lines are split at ``.``, ``!`` or ``?`` followed by whitespace, skipping
    common abbreviations, initials, and breaks followed by a lowercase word.
    A line without terminal punctuation (e.g. a heading) is one sentence.
    Fragments without any word are dropped.
    """
    out = []
    for line in text.splitlines():
        for sent in split_line(line.strip()):
            if WORD_RE.search(sent):
                out.append(sent)
    return out


def regex_sentences(text: str, min_words: int = 3) -> list[str]:
    """Naive variant: newlines are ordinary whitespace, every ``[.!?]``
    followed by whitespace ends a sentence, and fragments of fewer than
    ``min_words`` words are discarded."""
    flat = " ".join(text.split())
    parts = _NAIVE_SPLIT_RE.split(flat) if flat else []
    return [p for p in parts if len(words(p)) >= min_words]


def paragraphs(text: str) -> list[str]:
    return [p.strip() for p in re.split(r"\n\s*\n", text) if p.strip()]
