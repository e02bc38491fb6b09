"""Maximal clique enumeration (Bron–Kerbosch with pivoting)."""
from __future__ import annotations

from typing import Sequence


def maximal_cliques(adjacency: Sequence[set[int]]) -> list[tuple[int, ...]]:
    """All maximal cliques of an undirected graph given as neighbor sets
    (no self loops), each sorted, listed in sorted order.

    Iterative, so deep cliques cannot exhaust the recursion limit.
    """
    n = len(adjacency)
    if n == 0:
        return []
    cliques = []
    stack = [((), set(range(n)), set())]
    while stack:
        r, p, x = stack.pop()
        if not p:
            if not x:
                cliques.append(tuple(sorted(r)))
            continue
        pivot = max(p | x, key=lambda u: (len(p & adjacency[u]), -u))
        for v in sorted(p - adjacency[pivot], reverse=True):
            nv = adjacency[v]
            stack.append((r + (v,), p & nv, x & nv))
            p = p - {v}
            x = x | {v}
    return sorted(cliques)
