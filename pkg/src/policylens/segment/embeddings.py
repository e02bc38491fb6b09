"""Word vectors: a small skip-gram trainer with negative sampling and the
plain-text table format ("<vocab> <dim>" header, one token per line)."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..kernels import sgns_pass
from ..text.tokenize import paragraphs, sentences, words


class EmptyVocabularyError(ValueError):
    """No token reached the minimum count."""


@dataclass
class EmbeddingTable:
    dimension: int
    vectors: dict[str, np.ndarray]

    def __post_init__(self):
        if self.dimension <= 0:
            raise ValueError("dimension must be positive")
        for tok, v in self.vectors.items():
            if v.shape != (self.dimension,):
                raise ValueError(f"vector for {tok!r} has shape {v.shape}, expected ({self.dimension},)")

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def mean_vector(self, tokens: Iterable[str]) -> np.ndarray:
        """Mean of the known tokens' vectors; zeros if none is known."""
        known = [self.vectors[t] for t in tokens if t in self.vectors]
        if not known:
            return np.zeros(self.dimension)
        return np.mean(known, axis=0)

    def similarity(self, a: str, b: str) -> float:
        va, vb = self.vectors[a], self.vectors[b]
        denom = float(np.linalg.norm(va) * np.linalg.norm(vb))
        return float(va @ vb) / denom if denom else 0.0

    def save(self, path: str | Path) -> None:
        lines = [f"{len(self.vectors)} {self.dimension}"]
        for tok, v in self.vectors.items():
            lines.append(tok + " " + " ".join(f"{x:.6f}" for x in v))
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "EmbeddingTable":
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise ValueError(f"{path}: first line must be '<vocab_size> <dimension>'")
            size, dim = int(header[0]), int(header[1])
            vectors = {}
            for lineno, line in enumerate(fh, start=2):
                parts = line.rstrip("\n").split(" ")
                if not parts or parts == [""]:
                    continue
                if len(parts) != dim + 1:
                    raise ValueError(f"{path}:{lineno}: expected {dim} values")
                vectors[parts[0]] = np.array([float(x) for x in parts[1:]])
        if len(vectors) != size:
            raise ValueError(f"{path}: header says {size} tokens, found {len(vectors)}")
        return cls(dim, vectors)


def tokenize(text: str) -> list[str]:
    return [w.lower() for w in words(text)]


def corpus_sentences(texts: Iterable[str]) -> list[list[str]]:
    out = []
    for text in texts:
        for para in paragraphs(text):
            for s in sentences(para):
                toks = tokenize(s)
                if toks:
                    out.append(toks)
    return out


def _training_pairs(seqs: Sequence[np.ndarray], window: int) -> tuple[np.ndarray, np.ndarray]:
    centers, contexts = [], []
    for seq in seqs:
        n = len(seq)
        for i in range(n):
            lo, hi = max(0, i - window), min(n, i + window + 1)
            for j in range(lo, hi):
                if j != i:
                    centers.append(seq[i])
                    contexts.append(seq[j])
    return np.asarray(centers, dtype=np.int64), np.asarray(contexts, dtype=np.int64)


def train_embeddings(
    texts: Iterable[str],
    dimension: int = 300,
    min_count: int = 5,
    *,
    window: int = 5,
    negative: int = 5,
    epochs: int = 5,
    learning_rate: float = 0.025,
    seed: int = 0,
) -> EmbeddingTable:
    """Skip-gram vectors with negative sampling over tokens seen at least
    ``min_count`` times.  Identical inputs and seed give identical tables."""
    sents = corpus_sentences(texts)
    if not sents:
        raise EmptyVocabularyError("corpus has no tokens")
    counts = Counter(t for s in sents for t in s)
    vocab = sorted((t for t, c in counts.items() if c >= min_count), key=lambda t: (-counts[t], t))
    if not vocab:
        raise EmptyVocabularyError(f"no token occurs at least {min_count} times")
    index = {t: i for i, t in enumerate(vocab)}
    seqs = [np.array([index[t] for t in s if t in index], dtype=np.int64) for s in sents]
    seqs = [s for s in seqs if len(s) > 1]
    rng = np.random.default_rng(seed)
    w_in = (rng.random((len(vocab), dimension)) - 0.5) / dimension
    w_out = np.zeros((len(vocab), dimension))
    centers, contexts = _training_pairs(seqs, window)
    if centers.size:
        freq = np.array([counts[t] for t in vocab], dtype=np.float64) ** 0.75
        cdf = np.cumsum(freq / freq.sum())
        total = epochs * centers.size
        lr_floor = learning_rate * 1e-4
        for epoch in range(epochs):
            order = rng.permutation(centers.size)
            negs = np.searchsorted(cdf, rng.random((centers.size, negative)), side="right")
            negs = np.minimum(negs, len(vocab) - 1).astype(np.int64)
            done = epoch * centers.size + np.arange(centers.size)
            lrs = np.maximum(learning_rate * (1.0 - done / total), lr_floor)
            sgns_pass(w_in, w_out, centers[order], contexts[order], negs, lrs)
    return EmbeddingTable(dimension, {t: w_in[i].copy() for i, t in enumerate(vocab)})
