"""Loading of one-token-per-line word lists (``#`` starts a comment)."""
from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path


class WordListError(FileNotFoundError):
    """A configured word list could not be read."""


def parse_word_list(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def load_word_list(path: str | Path) -> list[str]:
    p = Path(path)
    try:
        return parse_word_list(p.read_text(encoding="utf-8"))
    except OSError as exc:
        raise WordListError(f"cannot read word list {p}: {exc}") from exc


@lru_cache(maxsize=None)
def packaged(name: str) -> tuple[str, ...]:
    """A word list shipped in ``policylens/data``."""
    text = resources.files("policylens.data").joinpath(name).read_text(encoding="utf-8")
    return tuple(parse_word_list(text))


def stop_words() -> frozenset[str]:
    return frozenset(w.lower() for w in packaged("stopwords.txt"))


def irregular_participles() -> frozenset[str]:
    return frozenset(w.lower() for w in packaged("irregular_participles.txt"))


def default_obfuscating_words() -> tuple[str, ...]:
    return packaged("obfuscating_words.txt")


def load_hyphenation(path: str | Path) -> dict[str, int]:
    """Hyphenation dictionary: one hyphenated word per line (``pri-va-cy``).
    Returns word -> syllable count."""
    out = {}
    for entry in load_word_list(path):
        word = entry.replace("-", "").lower()
        out[word] = entry.count("-") + 1
    return out
