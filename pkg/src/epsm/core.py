"""EPSM searchers: EPSMa, EPSMb, EPSMc and the length dispatcher.

Every searcher returns the occurrences of ``p`` in ``t`` as an ascending
``int64`` array. With the simd backend the work happens in the compiled
kernels of :mod:`epsm._kernels`; any other backend runs the generic loops
below, which issue one packed instruction per call and therefore work for
every word layout the reference backend supports.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import UsageError
from .packed_word import BlockMask, Word, get_backend

DEFAULT_K = 11
EPSMA_MAX = 4  # EPSMa below this length, EPSMb from here up to 2*alpha


class Pattern:
    """A search pattern of ``m >= 1`` characters."""

    __slots__ = ("data", "m", "arr")

    def __init__(self, data):
        if isinstance(data, str):
            data = data.encode("latin-1")
        data = bytes(data)
        if not data:
            raise UsageError("pattern must not be empty")
        self.data = data
        self.m = len(data)
        self.arr = np.frombuffer(data, dtype=np.uint8).copy()

    def __len__(self):
        return self.m

    def __repr__(self):
        return f"Pattern({self.data!r})"


class Text:
    """Text stored in whole ``alpha``-character blocks.

    The buffer holds at least one block past the last full one, zero-filled,
    so EPSMb can always read the blend partner ``T_{i+1}``. Those padding
    bytes never produce an occurrence: every candidate is checked against
    the real length ``n``.
    """

    def __init__(self, data, alpha: int = 16):
        if isinstance(data, str):
            data = data.encode("latin-1")
        data = bytes(data)
        self.data = data
        self.n = len(data)
        self.alpha = alpha
        self.capacity = (self.n // alpha + 1) * alpha
        buf = np.zeros(self.capacity + (-self.capacity) % 8, dtype=np.uint8)
        buf[: self.n] = np.frombuffer(data, dtype=np.uint8)
        self.buf = buf
        self.lanes = buf.view(np.uint64)

    def __len__(self):
        return self.n

    @property
    def full_blocks(self) -> int:
        return self.n // self.alpha

    def block(self, i: int):
        """Characters of aligned block ``i`` (zero beyond ``n``)."""
        start = i * self.alpha
        if i < 0 or start + self.alpha > self.capacity:
            raise IndexError(f"block {i} outside padded capacity {self.capacity}")
        return self.buf[start : start + self.alpha]


def as_pattern(p) -> Pattern:
    return p if isinstance(p, Pattern) else Pattern(p)


def as_text(t, alpha: int = 16) -> Text:
    if isinstance(t, Text):
        if t.alpha != alpha:
            raise UsageError(f"text blocked at alpha={t.alpha}, backend needs {alpha}")
        return t
    return Text(t, alpha)


@dataclass(frozen=True)
class BroadcastTable:
    words: tuple

    def __len__(self):
        return len(self.words)


@dataclass(frozen=True)
class ScanPlan:
    step: int
    thresholds: tuple


def scan_plan(m: int, alpha: int = 16) -> ScanPlan:
    """EPSMc inspection step and the dispatcher cut-offs for a length-``m`` pattern."""
    step = (m // alpha - 1) * alpha
    return ScanPlan(step=step, thresholds=(EPSMA_MAX, 2 * alpha))


@dataclass(frozen=True, eq=False)
class FingerprintTable:
    """Pattern block offsets bucketed by masked CRC, stored CSR-style.

    Bucket ``v`` is ``offsets[starts[v]:starts[v + 1]]``, ascending.
    """

    k: int
    mask: int
    starts: np.ndarray
    offsets: np.ndarray

    def bucket(self, v: int) -> list:
        return self.offsets[self.starts[v] : self.starts[v + 1]].tolist()

    @property
    def buckets(self) -> list:
        return [self.bucket(v) for v in range(1 << self.k)]

    def __eq__(self, other):
        if not isinstance(other, FingerprintTable):
            return NotImplemented
        return (
            self.k == other.k
            and np.array_equal(self.starts, other.starts)
            and np.array_equal(self.offsets, other.offsets)
        )


def _backend(backend):
    if backend is None or isinstance(backend, str):
        return get_backend(backend)
    return backend


def _is_simd(be) -> bool:
    return getattr(be, "name", None) == "simd"


def _out(t: Text, m: int):
    return np.empty(max(t.n - m + 1, 0), dtype=np.int64)


def verify(p, t, s: int) -> bool:
    """True iff the pattern occurs in the text at start ``s``."""
    p = as_pattern(p)
    data = t.data if isinstance(t, Text) else bytes(t)
    if s < 0 or s > len(data) - p.m:
        return False
    return data[s : s + p.m] == p.data


def build_broadcast_table(p, backend=None) -> BroadcastTable:
    be = _backend(backend)
    p = as_pattern(p)
    mp = min(p.m, be.config.alpha // 2)
    return BroadcastTable(tuple(be.broadcast(c) for c in p.data[:mp]))


def build_fingerprint_table(p, k: int = DEFAULT_K, backend=None) -> FingerprintTable:
    be = _backend(backend)
    p = as_pattern(p)
    alpha = be.config.alpha
    if p.m < 2 * alpha:
        raise UsageError(f"fingerprint table needs m >= {2 * alpha}, got m={p.m}")
    if not 1 <= k <= 32:
        raise UsageError(f"fingerprint bits k={k} outside 1..32")
    mask = (1 << k) - 1
    if _is_simd(be):
        if k > 24:
            # CSR over 2^k buckets; keep the array allocation sane
            raise UsageError(f"simd fingerprint table supports k <= 24, got {k}")
        starts, offsets = _kernels.fingerprint_table(p.arr, p.m, k)
        return FingerprintTable(k, mask, starts, offsets)
    buckets = {}
    for i in range(p.m - alpha + 1):
        v = be.wscrc(be.load(p.data, i)) & mask
        buckets.setdefault(v, []).append(i)
    return _csr(k, mask, buckets)


def _csr(k, mask, buckets) -> FingerprintTable:
    size = 1 << k
    counts = np.zeros(size + 1, dtype=np.int64)
    for v, offs in buckets.items():
        counts[v + 1] = len(offs)
    starts = np.cumsum(counts)
    offsets = np.empty(int(starts[-1]), dtype=np.int64)
    for v, offs in buckets.items():
        offsets[starts[v] : starts[v + 1]] = offs
    return FingerprintTable(k, mask, starts, offsets)


def epsm_a(p, t, backend=None) -> np.ndarray:
    """EPSMa: broadcast-compare filter, correct for every ``m``, meant for ``m < 4``."""
    be = _backend(backend)
    p = as_pattern(p)
    t = as_text(t, be.config.alpha)
    if p.m > t.n:
        return np.empty(0, dtype=np.int64)
    if _is_simd(be):
        out = _out(t, p.m)
        cnt = _kernels.epsm_a(t.buf, t.lanes, t.n, p.arr, p.m, out)
        return out[:cnt].copy()
    return _epsm_a_generic(p, t, be)


def _epsm_a_generic(p: Pattern, t: Text, be) -> np.ndarray:
    alpha = be.config.alpha
    m = p.m
    table = build_broadcast_table(p, be)
    mp = len(table)
    contained = (1 << (alpha - m + 1)) - 1 if m <= alpha else 0
    found = []
    for i in range(t.full_blocks):
        block = Word(tuple(t.block(i)), be.config)
        r = contained
        for j, bj in enumerate(table.words):
            r &= be.wscmp(block, bj).bits >> j
        base = i * alpha
        for off in be.mask_positions(BlockMask(r, alpha)):
            s = base + off
            if m == mp or verify(p, t, s):
                found.append(s)
        for s in range(max(base, base + alpha - m + 1), base + alpha):
            if verify(p, t, s):
                found.append(s)
    for s in range(t.full_blocks * alpha, t.n - m + 1):
        if verify(p, t, s):
            found.append(s)
    return np.asarray(found, dtype=np.int64)


def epsm_b(p, t, backend=None) -> np.ndarray:
    """EPSMb: 4-character prefix filter on each block and on its blend with the next."""
    be = _backend(backend)
    p = as_pattern(p)
    if p.m < 4:
        raise UsageError(f"EPSMb needs m >= 4, got m={p.m}")
    alpha = be.config.alpha
    if alpha < 8:
        raise UsageError(f"EPSMb needs alpha >= 8, got alpha={alpha}")
    t = as_text(t, alpha)
    if p.m > t.n:
        return np.empty(0, dtype=np.int64)
    if _is_simd(be):
        out = _out(t, p.m)
        cnt = _kernels.epsm_b(t.buf, t.lanes, t.n, p.arr, p.m, out)
        return out[:cnt].copy()
    return _epsm_b_generic(p, t, be)


def _epsm_b_generic(p: Pattern, t: Text, be) -> np.ndarray:
    alpha = be.config.alpha
    half = alpha // 2
    mp = min(p.m, half)
    prefix = p.data[:mp]
    found = []
    for i in range(t.full_blocks):
        block = Word(tuple(t.block(i)), be.config)
        nxt = Word(tuple(t.block(i + 1)), be.config)
        base = i * alpha
        r = be.wsmatch_filter4(block, prefix, mp)
        for off in be.mask_positions(r):
            if verify(p, t, base + off):
                found.append(base + off)
        r = be.wsmatch_filter4(be.wsblend(block, nxt), prefix, mp)
        for off in be.mask_positions(r):
            if verify(p, t, base + half + off):
                found.append(base + half + off)
    for s in range(t.full_blocks * alpha, t.n - p.m + 1):
        if verify(p, t, s):
            found.append(s)
    return np.asarray(found, dtype=np.int64)


def epsm_c(p, t, k: int = DEFAULT_K, backend=None, on_candidate=None) -> np.ndarray:
    """EPSMc: CRC fingerprints of blocks inspected every ``(m // alpha - 1) * alpha`` characters.

    ``on_candidate``, if given, is called with every candidate start before
    verification (instrumentation for the completeness tests).
    """
    be = _backend(backend)
    p = as_pattern(p)
    alpha = be.config.alpha
    if p.m < 2 * alpha:
        raise UsageError(f"EPSMc needs m >= {2 * alpha}, got m={p.m}")
    t = as_text(t, alpha)
    table = build_fingerprint_table(p, k, be)
    if p.m > t.n:
        return np.empty(0, dtype=np.int64)
    step = scan_plan(p.m, alpha).step
    if _is_simd(be):
        out = _out(t, p.m)
        if on_candidate is None:
            cand = np.empty(0, dtype=np.int64)
        else:
            cand = np.empty((t.n // step + 1) * (p.m - alpha + 1), dtype=np.int64)
        cnt, nc = _kernels.epsm_c(
            t.buf, t.lanes, t.n, p.arr, p.m, table.starts, table.offsets,
            np.uint64(table.mask), step, out, cand,
        )
        if on_candidate is not None:
            for s in cand[:nc].tolist():
                on_candidate(s)
        return out[:cnt].copy()
    return _epsm_c_generic(p, t, be, table, step, on_candidate)


def _epsm_c_generic(p, t, be, table, step, on_candidate) -> np.ndarray:
    alpha = be.config.alpha
    found = set()
    c = 0
    while c + alpha <= t.n:
        v = be.wscrc(Word(tuple(t.block(c // alpha)), be.config)) & table.mask
        for j in table.bucket(v):
            s = c - j
            if 0 <= s <= t.n - p.m:
                if on_candidate is not None:
                    on_candidate(s)
                if verify(p, t, s):
                    found.add(s)
        c += step
    return np.asarray(sorted(found), dtype=np.int64)


def kernel_for(m: int, alpha: int = 16) -> str:
    """Name of the kernel the dispatcher uses for a length-``m`` pattern."""
    if m < 1:
        raise UsageError("pattern must not be empty")
    if m < EPSMA_MAX:
        return "epsm_a"
    if m < 2 * alpha:
        return "epsm_b"
    return "epsm_c"


def search(p, t, backend=None) -> np.ndarray:
    """All occurrences of ``p`` in ``t`` (EPSMa for m<4, EPSMb below 2*alpha, EPSMc beyond)."""
    be = _backend(backend)
    p = as_pattern(p)
    t = as_text(t, be.config.alpha)
    name = kernel_for(p.m, be.config.alpha)
    if name == "epsm_a":
        return epsm_a(p, t, be)
    if name == "epsm_b":
        return epsm_b(p, t, be)
    return epsm_c(p, t, DEFAULT_K, be)
