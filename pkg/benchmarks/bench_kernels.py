"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from policylens import kernels
from policylens._accel import NUMBA_AVAILABLE


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng: np.random.Generator):
    probs = rng.random(2000)
    vocab, dim, pairs, neg = 2000, 100, 20000, 5
    w_in = (rng.random((vocab, dim)) - 0.5) / dim
    w_out = np.zeros((vocab, dim))
    centers = rng.integers(0, vocab, pairs)
    contexts = rng.integers(0, vocab, pairs)
    negatives = rng.integers(0, vocab, (pairs, neg))
    lrs = np.full(pairs, 0.025)

    def sgns(fn):
        return lambda: fn(w_in.copy(), w_out.copy(), centers, contexts, negatives, lrs)

    yield "poibin_pmf n=2000", lambda: kernels.poibin_pmf_numpy(probs), lambda: kernels.poibin_pmf_numba(probs)
    yield "sgns_pass 20k pairs", sgns(kernels.sgns_pass_numpy), sgns(kernels.sgns_pass_numba)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not NUMBA_AVAILABLE:
        print("numba is not installed; only the numpy path would run")
        return
    rng = np.random.default_rng(0)
    print(f"{'kernel':<24}{'numpy s':>10}{'numba s':>10}{'speedup':>9}")
    for name, slow, fast in cases(rng):
        fast()  # compile
        t_np, t_nb = best_of(slow, args.repeat), best_of(fast, args.repeat)
        print(f"{name:<24}{t_np:>10.4f}{t_nb:>10.4f}{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
