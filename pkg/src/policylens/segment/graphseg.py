"""Sentence-graph segmentation.

Sentences are nodes; two sentences are linked when their relatedness (cosine
of mean word vectors) reaches a threshold.  Adjacent sentences that share a
maximal clique form the initial segments, adjacent initial segments that
share a clique are joined, and segments below the minimum size are folded
into a neighbor.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..kernels import cosine_matrix
from ..text.tokenize import paragraphs, sentences
from .cliques import maximal_cliques
from .embeddings import EmbeddingTable, tokenize

MAX_SENTENCES = 2000


@dataclass(frozen=True)
class Segment:
    policy_ref: str
    index: int
    sentence_span: tuple[int, int]
    text: str

    def to_dict(self) -> dict:
        return {"policy_ref": self.policy_ref, "index": self.index,
                "sentence_span": list(self.sentence_span), "text": self.text}


def _as_tokens(s) -> list[str]:
    return tokenize(s) if isinstance(s, str) else list(s)


def sentence_relatedness(a, b, emb: EmbeddingTable) -> float:
    """Cosine similarity of the sentences' mean token vectors; 0 when either
    sentence has no known token."""
    va, vb = emb.mean_vector(_as_tokens(a)), emb.mean_vector(_as_tokens(b))
    return float(cosine_matrix(np.vstack([va, vb]))[0, 1])


def policy_sentences(text: str) -> list[tuple[str, int]]:
    """(sentence, paragraph index) for every sentence of ``text``."""
    return [(s, i) for i, para in enumerate(paragraphs(text)) for s in sentences(para)]


def relatedness_graph(sents: Sequence, emb: EmbeddingTable, threshold: float) -> list[set[int]]:
    vecs = np.vstack([emb.mean_vector(_as_tokens(s)) for s in sents]) if sents else np.zeros((0, emb.dimension))
    sim = cosine_matrix(vecs)
    adj = []
    for i in range(len(sents)):
        row = np.nonzero(sim[i] >= threshold)[0]
        adj.append({int(j) for j in row if j != i})
    return adj


def boundaries_from_cliques(n: int, cliques: Sequence[Sequence[int]]) -> list[int]:
    """Segment start indices after the two clique-merging passes."""
    if n == 0:
        return []
    membership: list[set[int]] = [set() for _ in range(n)]
    for ci, q in enumerate(cliques):
        for v in q:
            membership[v].add(ci)
    # pass 1: neighboring sentences in a common clique stay together
    starts = [0] + [i for i in range(1, n) if not (membership[i - 1] & membership[i])]
    ends = starts[1:] + [n]
    seg_cliques = [set().union(*membership[s:e]) for s, e in zip(starts, ends)]
    # pass 2: join neighboring initial segments that share a clique
    merged = [starts[0]]
    for j in range(1, len(starts)):
        if not (seg_cliques[j - 1] & seg_cliques[j]):
            merged.append(starts[j])
    return merged


def _enforce_min_size(starts: list[int], n: int, min_size: int) -> list[int]:
    starts = list(starts)
    while len(starts) > 1:
        ends = starts[1:] + [n]
        small = next((j for j, (s, e) in enumerate(zip(starts, ends)) if e - s < min_size), None)
        if small is None:
            break
        # fold into the preceding segment, or the following one for the first
        del starts[small if small > 0 else 1]
    return starts


def _chunks(para_of: Sequence[int], cap: int) -> list[tuple[int, int]]:
    """Split sentence indices into runs of at most ``cap``, cutting at
    paragraph breaks where possible."""
    n = len(para_of)
    out, start = [], 0
    while start < n:
        end = min(start + cap, n)
        if end < n:
            cut = next((i for i in range(end, start, -1) if para_of[i] != para_of[i - 1]), None)
            end = cut if cut is not None else end
        out.append((start, end))
        start = end
    return out


def segment_sentences(
    sents: Sequence,
    emb: EmbeddingTable,
    threshold: float = 0.25,
    min_size: int = 1,
) -> list[tuple[int, int]]:
    """Spans [start, end) partitioning ``sents`` (strings or token lists)."""
    n = len(sents)
    if n == 0:
        return []
    adj = relatedness_graph(sents, emb, threshold)
    starts = boundaries_from_cliques(n, maximal_cliques(adj))
    starts = _enforce_min_size(starts, n, min_size)
    return list(zip(starts, starts[1:] + [n]))


def segment(
    policy_text: str,
    emb: EmbeddingTable,
    threshold: float = 0.25,
    min_size: int = 1,
    *,
    policy_ref: str = "",
    max_sentences: int = MAX_SENTENCES,
) -> list[Segment]:
    """Split a policy into ordered, contiguous segments covering every
    sentence once."""
    if min_size < 1:
        raise ValueError("min_size must be >= 1")
    pairs = policy_sentences(policy_text)
    sents = [s for s, _ in pairs]
    spans = []
    for lo, hi in _chunks([p for _, p in pairs], max_sentences):
        spans += [(lo + s, lo + e) for s, e in segment_sentences(sents[lo:hi], emb, threshold, min_size)]
    return [
        Segment(policy_ref, i, (s, e), " ".join(sents[s:e]))
        for i, (s, e) in enumerate(spans)
    ]
