"""Hot numeric kernels for n-gram overlap counting.

These loops sit inside the Monte Carlo playout scorer and are executed
once per playout per beam node per step, so they are compiled with numba
when available.  Set ``EVENTSENT_NO_NUMBA=1`` to force the pure-numpy
path (identical results; see benchmarks/bench_kernels.py).
"""

from __future__ import annotations

import os

import numpy as np

NUMBA_ENABLED = os.environ.get("EVENTSENT_NO_NUMBA", "") not in ("1", "true", "yes")
if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        NUMBA_ENABLED = False

# Rolled 4-gram keys must fit in int64: ids are required to be < _BASE
# and _BASE**4 < 2**63.  Callers map tokens to call-local ids, which stay
# far below this at desk scale.
_BASE = np.int64(50_021)


def _clipped_matches_py(cand: np.ndarray, ref: np.ndarray, n: int) -> tuple[int, int]:
    """Clipped n-gram matches between candidate and reference id arrays,
    plus the candidate n-gram total (modified-precision numerator and
    denominator).  N-grams are rolled into single int64 keys."""
    nc = cand.shape[0] - n + 1
    nr = ref.shape[0] - n + 1
    if nc <= 0:
        return 0, 0
    cand_keys = np.zeros(nc, dtype=np.int64)
    for i in range(nc):
        key = np.int64(0)
        for j in range(n):
            key = key * _BASE + cand[i + j]
        cand_keys[i] = key
    ref_keys = np.zeros(max(nr, 0), dtype=np.int64)
    for i in range(max(nr, 0)):
        key = np.int64(0)
        for j in range(n):
            key = key * _BASE + ref[i + j]
        ref_keys[i] = key
    cand_keys.sort()
    ref_keys.sort()
    matches = 0
    i = 0
    j = 0
    while i < nc and j < ref_keys.shape[0]:
        if cand_keys[i] == ref_keys[j]:
            # advance through the shared run, clipping by the smaller count
            key = cand_keys[i]
            ci = 0
            while i < nc and cand_keys[i] == key:
                ci += 1
                i += 1
            cj = 0
            while j < ref_keys.shape[0] and ref_keys[j] == key:
                cj += 1
                j += 1
            matches += min(ci, cj)
        elif cand_keys[i] < ref_keys[j]:
            i += 1
        else:
            j += 1
    return matches, nc


def _contains_py(haystack: np.ndarray, needle: int) -> bool:
    for i in range(haystack.shape[0]):
        if haystack[i] == needle:
            return True
    return False


if NUMBA_ENABLED:
    clipped_ngram_matches = njit(cache=True)(_clipped_matches_py)
    contains_token = njit(cache=True)(_contains_py)
else:
    clipped_ngram_matches = _clipped_matches_py
    contains_token = _contains_py


def warmup() -> None:
    """Trigger JIT compilation so timing loops measure steady state."""
    a = np.arange(8, dtype=np.int64)
    for n in range(1, 5):
        clipped_ngram_matches(a, a, n)
    contains_token(a, 3)
