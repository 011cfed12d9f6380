#!/usr/bin/env python3
"""Benchmark the n-gram overlap kernel: compiled path vs pure-Python
fallback.

Run with defaults::

    python3 benchmarks/bench_kernels.py

The compiled column disappears when EVENTSENT_NO_NUMBA=1 is set (both
columns then measure the fallback).
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from eventsent import kernels


def bench(fn, cases, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for cand, ref, n in cases:
            fn(cand, ref, n)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--pairs", type=int, default=2000, help="case count")
    ap.add_argument("--length", type=int, default=24, help="sequence length")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    cases = [
        (
            rng.integers(0, 50, size=args.length).astype(np.int64),
            rng.integers(0, 50, size=args.length).astype(np.int64),
            int(rng.integers(1, 5)),
        )
        for _ in range(args.pairs)
    ]

    kernels.warmup()
    compiled = bench(kernels.clipped_ngram_matches, cases, args.repeats)
    fallback = bench(kernels._clipped_matches_py, cases, args.repeats)

    mode = "numba" if kernels.NUMBA_ENABLED else "pure-python (EVENTSENT_NO_NUMBA)"
    print(f"kernel mode:        {mode}")
    print(f"cases:              {args.pairs} x length {args.length}")
    print(f"selected kernel:    {compiled * 1e3:8.2f} ms")
    print(f"pure-python:        {fallback * 1e3:8.2f} ms")
    if kernels.NUMBA_ENABLED and compiled > 0:
        print(f"speedup:            {fallback / compiled:8.1f}x")

    # both paths must agree exactly
    for cand, ref, n in cases[:200]:
        assert tuple(kernels.clipped_ngram_matches(cand, ref, n)) == tuple(
            kernels._clipped_matches_py(cand, ref, n)
        )
    print("parity check:       ok (200 cases identical)")


if __name__ == "__main__":
    main()
