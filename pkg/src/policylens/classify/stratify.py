"""Iterative stratification for multi-label train/validation/test splits."""
from __future__ import annotations

from typing import Sequence

import numpy as np

SUBSETS = ("train", "validation", "test")


def iterative_stratification(
    y: np.ndarray,
    ratios: Sequence[float] = (3, 1, 1),
    seed: int = 0,
    *,
    balance: bool = True,
    attempts: int = 20,
) -> np.ndarray:
    """Subset index (0..len(ratios)-1) for every row of the 0/1 matrix ``y``.

    The rarest remaining label is handled first; each of its examples goes
    to the subset with the largest outstanding demand for that label, ties
    broken by overall remaining capacity and then at random.

    With ``balance`` the result is then refined by :func:`rebalance`, which
    moves and swaps examples until no label count (or subset size) is more
    than one example away from its proportional target, when it can.  If
    the local search stalls, the whole procedure is retried with further
    deterministic random streams (up to ``attempts``) and the best result
    is kept.
    """
    y = np.asarray(y, dtype=bool)
    if y.ndim != 2:
        raise ValueError("label matrix must be 2-D")
    r = np.asarray(ratios, dtype=np.float64)
    if r.size == 0 or np.any(r <= 0):
        raise ValueError("ratios must be positive")
    r = r / r.sum()
    if not balance:
        return _stratify_once(y, r, np.random.default_rng(seed))
    best, best_score = None, None
    for attempt in range(max(attempts, 1)):
        rng = np.random.default_rng([seed, attempt]) if attempt else np.random.default_rng(seed)
        assign = rebalance(y, _stratify_once(y, r, rng), r)
        score = _excess(_deviation(y, assign, r))
        if best_score is None or score[:2] < best_score[:2]:
            best, best_score = assign, score
        if best_score[:2] == (0.0, 0.0):
            break
    return best


def _deviation(y: np.ndarray, assign: np.ndarray, r: np.ndarray) -> np.ndarray:
    ext = np.hstack([np.asarray(y, dtype=np.int64), np.ones((len(assign), 1), dtype=np.int64)])
    counts = np.vstack([ext[assign == j].sum(axis=0) for j in range(len(r))])
    return counts - np.outer(r, ext.sum(axis=0))


def _stratify_once(y: np.ndarray, r: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    n, q = y.shape
    assign = np.full(n, -1, dtype=np.int64)
    if n == 0:
        return assign
    capacity = n * r
    demand = np.outer(y.sum(axis=0), r).T  # (subsets, labels)
    remaining = y.copy()

    def pick(candidates: np.ndarray) -> int:
        return int(candidates[rng.integers(len(candidates))]) if len(candidates) > 1 else int(candidates[0])

    while True:
        counts = remaining.sum(axis=0)
        live = np.flatnonzero(counts)
        if live.size == 0:
            break
        label = live[np.argmin(counts[live])]
        rows = np.flatnonzero(remaining[:, label])
        for i in rng.permutation(rows):
            d = demand[:, label]
            best = np.flatnonzero(d == d.max())
            if best.size > 1:
                cap = capacity[best]
                best = best[cap == cap.max()]
            j = pick(best)
            assign[i] = j
            remaining[i] = False
            demand[j, y[i]] -= 1
            capacity[j] -= 1
    for i in rng.permutation(np.flatnonzero(assign < 0)):
        best = np.flatnonzero(capacity == capacity.max())
        j = pick(best)
        assign[i] = j
        capacity[j] -= 1
    return assign


def _excess(dev: np.ndarray) -> tuple[float, float, float]:
    # labels first, then subset size (last column), then overall spread
    over = np.maximum(np.abs(dev) - 1.0, 0.0)
    return float(over[:, :-1].sum()), float(over[:, -1].sum()), float((dev * dev).sum())


def rebalance(y: np.ndarray, assign: np.ndarray, ratios: np.ndarray, max_steps: int = 10_000) -> np.ndarray:
    """Greedy local search on an assignment: apply the single move or swap
    that most reduces the label-count excess over the +-1 band (then the
    subset-size excess, then the squared deviation) until every count is in
    band or nothing helps.
    """
    assign = assign.copy()
    k = len(ratios)
    if len(assign) == 0:
        return assign
    ext = np.hstack([np.asarray(y, dtype=np.int64), np.ones((len(assign), 1), dtype=np.int64)])
    target = np.outer(ratios, ext.sum(axis=0))
    counts = np.vstack([ext[assign == j].sum(axis=0) for j in range(k)])
    for _ in range(max_steps):
        dev = counts - target
        if np.abs(dev).max() <= 1.0 + 1e-9:
            break
        best = _excess(dev)
        best_move = None
        # distinct label patterns per subset, with one representative row
        reps = []
        for j in range(k):
            rows = np.flatnonzero(assign == j)
            _, first = np.unique(ext[rows], axis=0, return_index=True)
            reps.append(rows[np.sort(first)])
        for a in range(k):
            for i in reps[a]:
                for b in range(k):
                    if b == a:
                        continue
                    # move i from a to b
                    d = dev.copy()
                    d[a] -= ext[i]
                    d[b] += ext[i]
                    score = _excess(d)
                    if score < best:
                        best, best_move = score, (i, b, None)
                    # swap i with a representative of b
                    for m in reps[b]:
                        delta = ext[i] - ext[m]
                        if not delta.any():
                            continue
                        d = dev.copy()
                        d[a] -= delta
                        d[b] += delta
                        score = _excess(d)
                        if score < best:
                            best, best_move = score, (i, b, m)
        if best_move is None:
            break
        i, b, m = best_move
        a = assign[i]
        counts[a] -= ext[i]
        counts[b] += ext[i]
        assign[i] = b
        if m is not None:
            counts[b] -= ext[m]
            counts[a] += ext[m]
            assign[m] = a
    return assign


def iterative_stratified_split(
    ids: Sequence,
    y: np.ndarray,
    ratios: Sequence[float] = (3, 1, 1),
    seed: int = 0,
    names: Sequence[str] = SUBSETS,
) -> dict:
    """Segment id -> subset name."""
    if len(ids) == 0:
        return {}
    if len(names) != len(ratios):
        raise ValueError("need one subset name per ratio")
    idx = iterative_stratification(y, ratios, seed)
    return {sid: names[j] for sid, j in zip(ids, idx)}
