"""Fused EPSM search loops for the 128-bit / 8-bit layout.

``buf`` is the zero-padded text (``uint8``) and ``lanes`` its ``uint64``
view; block ``i`` is ``lanes[2*i], lanes[2*i + 1]``. Padding guarantees that
block ``n // 16`` exists. Each kernel writes ascending start positions into
``out`` and returns how many it wrote.
"""
import numba as nb
import numpy as np

from .simd import U, bcast_lane, crc_lanes, filter4_lanes, load_lanes, lowest_bit, wscmp_lanes

ALPHA = 16
HALF = 8


@nb.njit(cache=True, inline="always")
def _verify(buf, s, p, m, start):
    for j in range(start, m):
        if buf[s + j] != p[j]:
            return False
    return True


@nb.njit(cache=True)
def epsm_a(buf, lanes, n, p, m, out):
    mp = min(m, HALF)
    bc = np.empty(mp, dtype=np.uint64)
    for j in range(mp):
        bc[j] = bcast_lane(p[j])
    last = n - m
    # start offsets whose occurrence stays inside the block
    inner = (U(1) << U(ALPHA - m + 1)) - U(1) if m <= ALPHA else U(0)
    nblocks = n // ALPHA
    cnt = 0
    for i in range(nblocks):
        lo = lanes[2 * i]
        hi = lanes[2 * i + 1]
        r = U(0xFFFF)
        for j in range(mp):
            # offsets whose j-th character lies past the block stay candidates
            spill = (U(0xFFFF) >> U(ALPHA - j)) << U(ALPHA - j)
            r &= (wscmp_lanes(lo, hi, bc[j], bc[j]) >> U(j)) | spill
        base = i * ALPHA
        rin = r & inner
        cross = r & ~inner
        if m == mp:
            while rin:
                out[cnt] = base + lowest_bit(rin)
                cnt += 1
                rin &= rin - U(1)
        else:
            while rin:
                s = base + lowest_bit(rin)
                rin &= rin - U(1)
                if _verify(buf, s, p, m, mp):
                    out[cnt] = s
                    cnt += 1
        # occurrences crossing into T_{i+1}: in-block part matched, check the rest
        while cross:
            s = base + lowest_bit(cross)
            cross &= cross - U(1)
            if s <= last and _verify(buf, s, p, m, 1):
                out[cnt] = s
                cnt += 1
    first = p[0]
    for s in range(nblocks * ALPHA, last + 1):
        if buf[s] == first and _verify(buf, s, p, m, 1):
            out[cnt] = s
            cnt += 1
    return cnt


@nb.njit(cache=True)
def epsm_b(buf, lanes, n, p, m, out):
    b32 = U(p[0]) | (U(p[1]) << U(8)) | (U(p[2]) << U(16)) | (U(p[3]) << U(24))
    last = n - m
    nblocks = n // ALPHA
    cnt = 0
    for i in range(nblocks):
        lo = lanes[2 * i]
        hi = lanes[2 * i + 1]
        nxt = lanes[2 * i + 2]
        # T_i covers offsets 0..7; blend(T_i, T_{i+1}) = (hi, nxt) covers 8..15
        r = filter4_lanes(lo, hi, b32) | (filter4_lanes(hi, nxt, b32) << U(HALF))
        base = i * ALPHA
        while r:
            s = base + lowest_bit(r)
            r &= r - U(1)
            if s <= last and _verify(buf, s, p, m, 4):
                out[cnt] = s
                cnt += 1
    first = p[0]
    for s in range(nblocks * ALPHA, last + 1):
        if buf[s] == first and _verify(buf, s, p, m, 1):
            out[cnt] = s
            cnt += 1
    return cnt


@nb.njit(cache=True)
def fingerprint_table(p, m, k):
    """Counting-sort the pattern's block fingerprints into CSR buckets."""
    mask = (U(1) << U(k)) - U(1)
    nsub = m - ALPHA + 1
    keys = np.empty(nsub, dtype=np.int64)
    starts = np.zeros((1 << k) + 1, dtype=np.int64)
    for i in range(nsub):
        lo, hi = load_lanes(p, i)
        v = np.int64(crc_lanes(lo, hi) & mask)
        keys[i] = v
        starts[v + 1] += 1
    for v in range(1 << k):
        starts[v + 1] += starts[v]
    fill = starts[:-1].copy()
    offsets = np.empty(nsub, dtype=np.int64)
    for i in range(nsub):
        v = keys[i]
        offsets[fill[v]] = i
        fill[v] += 1
    return starts, offsets


@nb.njit(cache=True)
def epsm_c(buf, lanes, n, p, m, starts, offsets, mask, step, out, cand):
    """Fingerprint filter; ``cand`` receives every candidate when non-empty.

    If ``c - j`` with ``j >= step`` is an occurrence, the block at
    ``c - step`` lies inside it too (offset ``j - step``) and already reported
    it, so such candidates are logged but not verified again. Walking each
    bucket from its largest offset down keeps the output ascending.
    """
    record = cand.shape[0] > 0
    last = n - m
    cnt = 0
    nc = 0
    c = 0
    while c + ALPHA <= n:
        w = c // 8
        v = np.int64(crc_lanes(lanes[w], lanes[w + 1]) & mask)
        for idx in range(starts[v + 1] - 1, starts[v] - 1, -1):
            j = offsets[idx]
            s = c - j
            if 0 <= s <= last:
                if record:
                    cand[nc] = s
                    nc += 1
                if j < step and _verify(buf, s, p, m, 0):
                    out[cnt] = s
                    cnt += 1
        c += step
    return cnt, nc
