"""Comparison searchers: naive scan, Shift-Or and simplified BNDM with q-grams.

All three return the same ascending ``int64`` occurrence array as the EPSM
kernels and are compiled with numba so that timing comparisons measure the
algorithms rather than interpreter overhead.
"""
from dataclasses import dataclass

import numba as nb
import numpy as np

from .core import Pattern, Text, as_pattern
from .errors import UsageError

WORD_BITS = 64


@dataclass(frozen=True)
class BaselineConfig:
    q: int = 2
    word_bits: int = WORD_BITS

    def __post_init__(self):
        if self.q < 1:
            raise UsageError(f"q must be >= 1, got {self.q}")
        if not 1 <= self.word_bits <= WORD_BITS:
            raise UsageError(f"word limit must lie in 1..{WORD_BITS}")


def _text_array(t):
    if isinstance(t, Text):
        return t.buf, t.n
    if isinstance(t, str):
        t = t.encode("latin-1")
    arr = np.frombuffer(bytes(t), dtype=np.uint8)
    return arr, arr.shape[0]


@nb.njit(cache=True)
def _naive(t, n, p, m, out):
    first = p[0]
    cnt = 0
    for s in range(n - m + 1):
        if t[s] == first:
            j = 1
            while j < m and t[s + j] == p[j]:
                j += 1
            if j == m:
                out[cnt] = s
                cnt += 1
    return cnt


@nb.njit(cache=True)
def _shift_or(t, n, p, m, out):
    one = np.uint64(1)
    masks = np.full(256, ~np.uint64(0), dtype=np.uint64)
    for i in range(m):
        masks[p[i]] &= ~(one << np.uint64(i))
    hit = one << np.uint64(m - 1)
    state = ~np.uint64(0)
    cnt = 0
    for j in range(n):
        state = (state << one) | masks[t[j]]
        if (state & hit) == 0:
            out[cnt] = j - m + 1
            cnt += 1
    return cnt


@nb.njit(cache=True)
def _sbndm_q(t, n, p, m, q, out):
    # masks[c] bit i set iff p[i] == c; after reading the window suffix u
    # (backwards), bit i of d says u occurs in p at i.
    one = np.uint64(1)
    masks = np.zeros(256, dtype=np.uint64)
    for i in range(m):
        masks[p[i]] |= one << np.uint64(i)
    cnt = 0
    j = m - 1
    while j < n:
        d = masks[t[j]]
        for l in range(1, q):
            d = (d >> one) & masks[t[j - l]]
        if d == 0:
            j += m - q + 1
            continue
        l = q
        while d != 0 and l < m:
            d = (d >> one) & masks[t[j - l]]
            l += 1
        if d != 0:
            out[cnt] = j - m + 1
            cnt += 1
            j += 1
        else:
            j += m - l + 1
    return cnt


def _run(kernel, p, t, *extra):
    p = as_pattern(p)
    arr, n = _text_array(t)
    if p.m > n:
        return np.empty(0, dtype=np.int64)
    out = np.empty(n - p.m + 1, dtype=np.int64)
    cnt = kernel(arr, n, p.arr, p.m, *extra, out)
    return out[:cnt].copy()


def naive_search(p, t) -> np.ndarray:
    """Every start ``s`` with ``t[s:s+m] == p``, by direct comparison."""
    return _run(_naive, p, t)


def shift_or_search(p, t, config: BaselineConfig = BaselineConfig()) -> np.ndarray:
    p = as_pattern(p)
    if p.m > config.word_bits:
        raise UsageError(f"Shift-Or handles m <= {config.word_bits}, got m={p.m}")
    return _run(_shift_or, p, t)


def sbndm_q_search(p, t, q: int = None, config: BaselineConfig = BaselineConfig()) -> np.ndarray:
    p = as_pattern(p)
    q = config.q if q is None else q
    if q < 1:
        raise UsageError(f"q must be >= 1, got {q}")
    if q > p.m:
        raise UsageError(f"q={q} exceeds pattern length m={p.m}")
    if p.m > config.word_bits:
        raise UsageError(f"SBNDMq handles m <= {config.word_bits}, got m={p.m}")
    return _run(_sbndm_q, p, t, q)


__all__ = ["BaselineConfig", "Pattern", "naive_search", "shift_or_search", "sbndm_q_search"]
