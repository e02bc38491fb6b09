"""Hot numeric loops, each with a numba and a pure-numpy implementation.

The public functions dispatch on :data:`policylens._accel.USE_NUMBA`; the
``*_numpy`` and ``*_numba`` variants are exported for testing and
benchmarking.
"""
from __future__ import annotations

import numpy as np

from . import _accel
from ._accel import njit

# ---------------------------------------------------------------------------
# Poisson-Binomial pmf by iterative convolution
# ---------------------------------------------------------------------------


def poibin_pmf_numpy(probs: np.ndarray) -> np.ndarray:
    probs = np.asarray(probs, dtype=np.float64)
    n = probs.shape[0]
    pmf = np.zeros(n + 1, dtype=np.float64)
    pmf[0] = 1.0
    for i in range(n):
        p = probs[i]
        # pmf[1:i+2] uses the old pmf[0:i+1]; compute the RHS before assigning
        pmf[1 : i + 2] = pmf[1 : i + 2] * (1.0 - p) + pmf[0 : i + 1] * p
        pmf[0] *= 1.0 - p
    return pmf


@njit(cache=True)
def poibin_pmf_numba(probs):
    n = probs.shape[0]
    pmf = np.zeros(n + 1, dtype=np.float64)
    pmf[0] = 1.0
    for i in range(n):
        p = probs[i]
        q = 1.0 - p
        for k in range(i + 1, 0, -1):
            pmf[k] = pmf[k] * q + pmf[k - 1] * p
        pmf[0] *= q
    return pmf


def poibin_pmf(probs: np.ndarray) -> np.ndarray:
    probs = np.ascontiguousarray(probs, dtype=np.float64)
    if _accel.USE_NUMBA:
        return poibin_pmf_numba(probs)
    return poibin_pmf_numpy(probs)


# ---------------------------------------------------------------------------
# Pairwise cosine similarity of row vectors
# ---------------------------------------------------------------------------


def cosine_matrix_numpy(vectors: np.ndarray) -> np.ndarray:
    vectors = np.asarray(vectors, dtype=np.float64)
    norms = np.sqrt((vectors * vectors).sum(axis=1))
    safe = np.where(norms > 0, norms, 1.0)
    unit = vectors / safe[:, None]
    sim = unit @ unit.T
    sim[norms == 0, :] = 0.0
    sim[:, norms == 0] = 0.0
    return np.clip(sim, -1.0, 1.0)


def cosine_matrix(vectors: np.ndarray) -> np.ndarray:
    vectors = np.ascontiguousarray(vectors, dtype=np.float64)
    if vectors.shape[0] == 0:
        return np.zeros((0, 0))
    # one BLAS matmul; a compiled loop kernel was slower here
    return cosine_matrix_numpy(vectors)


# ---------------------------------------------------------------------------
# Skip-gram with negative sampling: one pass over pre-drawn training pairs
# ---------------------------------------------------------------------------


def _sigmoid(x: float) -> float:
    if x > 30.0:
        return 1.0
    if x < -30.0:
        return 0.0
    return 1.0 / (1.0 + np.exp(-x))


def sgns_pass_numpy(w_in, w_out, centers, contexts, negatives, lrs):
    """In-place SGD over (center, context) pairs.

    ``negatives`` has shape (n_pairs, k); ``lrs`` holds the learning rate for
    each pair.  Returns the mean logistic loss of the pass.
    """
    loss = 0.0
    dim = w_in.shape[1]
    grad = np.empty(dim)
    for t in range(centers.shape[0]):
        c = centers[t]
        lr = lrs[t]
        v = w_in[c]
        grad[:] = 0.0
        targets = (contexts[t],) + tuple(negatives[t])
        for j, o in enumerate(targets):
            label = 1.0 if j == 0 else 0.0
            u = w_out[o]
            f = _sigmoid(float(np.dot(v, u)))
            g = lr * (label - f)
            loss -= np.log(max(f if label else 1.0 - f, 1e-12))
            grad += g * u
            w_out[o] = u + g * v
        w_in[c] = v + grad
    return loss / max(centers.shape[0], 1)


@njit(cache=True)
def sgns_pass_numba(w_in, w_out, centers, contexts, negatives, lrs):
    loss = 0.0
    dim = w_in.shape[1]
    k = negatives.shape[1]
    grad = np.empty(dim)
    for t in range(centers.shape[0]):
        c = centers[t]
        lr = lrs[t]
        for d in range(dim):
            grad[d] = 0.0
        for j in range(k + 1):
            if j == 0:
                o = contexts[t]
                label = 1.0
            else:
                o = negatives[t, j - 1]
                label = 0.0
            dot = 0.0
            for d in range(dim):
                dot += w_in[c, d] * w_out[o, d]
            if dot > 30.0:
                f = 1.0
            elif dot < -30.0:
                f = 0.0
            else:
                f = 1.0 / (1.0 + np.exp(-dot))
            g = lr * (label - f)
            if label > 0.0:
                loss -= np.log(max(f, 1e-12))
            else:
                loss -= np.log(max(1.0 - f, 1e-12))
            for d in range(dim):
                grad[d] += g * w_out[o, d]
                w_out[o, d] += g * w_in[c, d]
        for d in range(dim):
            w_in[c, d] += grad[d]
    return loss / max(centers.shape[0], 1)


def sgns_pass(w_in, w_out, centers, contexts, negatives, lrs) -> float:
    if _accel.USE_NUMBA:
        return float(sgns_pass_numba(w_in, w_out, centers, contexts, negatives, lrs))
    return float(sgns_pass_numpy(w_in, w_out, centers, contexts, negatives, lrs))
