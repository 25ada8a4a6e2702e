"""Compiled packed instructions for the 128-bit / 8-bit layout.

A 16-byte word travels as two ``uint64`` lanes ``(lo, hi)``: bytes 0..7 and
8..15, little-endian. Each instruction is a numba function built from SWAR
tricks on those lanes; the fused search kernels in :mod:`epsm._kernels`
inline the same functions, so the per-instruction wrappers on
:class:`SimdBackend` exercise exactly the code that runs in the searches.
"""
import numba as nb
import numpy as np

from .crc import TABLES
from .errors import UsageError
from .packed_word import SSE_CONFIG, BlockMask, Word, mask_positions, _check_short_string

try:
    from numba.cpython.unsafe.numbers import trailing_zeros
except ImportError:  # pragma: no cover - older/newer numba layouts
    trailing_zeros = None

U = np.uint64
ONES8 = U(0x0101010101010101)
HIGH8 = U(0x8080808080808080)
LOW7 = U(0x7F7F7F7F7F7F7F7F)
MOVEMASK_MAGIC = U(0x0102040810204080)
M32 = U(0xFFFFFFFF)
M5 = U(0x5555555555555555)
M3 = U(0x3333333333333333)
MF = U(0x0F0F0F0F0F0F0F0F)
M64 = (1 << 64) - 1

CRC_T = TABLES  # uint32[8, 256]

jit = nb.njit(cache=True, inline="always")


@jit
def zero_byte_mask(x):
    """8-bit mask with bit i set iff byte i of ``x`` is zero."""
    y = ((x & LOW7) + LOW7) | x
    z = ~y & HIGH8
    return ((z >> U(7)) * MOVEMASK_MAGIC) >> U(56)


@jit
def bcast_lane(c):
    return ONES8 * U(c)


@jit
def wscmp_lanes(alo, ahi, blo, bhi):
    return zero_byte_mask(alo ^ blo) | (zero_byte_mask(ahi ^ bhi) << U(8))


@jit
def match_exact_lanes(lo, hi, b, k):
    r = U(0xFFFF)
    for j in range(k):
        c = bcast_lane(b[j])
        r &= wscmp_lanes(lo, hi, c, c) >> U(j)
    return r


@jit
def filter4_lanes(lo, hi, b32):
    # windows 0..3 sit in lo; windows 4..7 in bytes 4..11
    mid = (lo >> U(32)) | (hi << U(32))
    r = U(0)
    for i in range(4):
        if ((lo >> U(8 * i)) & M32) == b32:
            r |= U(1) << U(i)
        if ((mid >> U(8 * i)) & M32) == b32:
            r |= U(1) << U(i + 4)
    return r


@jit
def crc_lane(crc, v):
    x = crc ^ v
    return (
        U(CRC_T[7, x & U(0xFF)])
        ^ CRC_T[6, (x >> U(8)) & U(0xFF)]
        ^ CRC_T[5, (x >> U(16)) & U(0xFF)]
        ^ CRC_T[4, (x >> U(24)) & U(0xFF)]
        ^ CRC_T[3, (x >> U(32)) & U(0xFF)]
        ^ CRC_T[2, (x >> U(40)) & U(0xFF)]
        ^ CRC_T[1, (x >> U(48)) & U(0xFF)]
        ^ CRC_T[0, x >> U(56)]
    )


@jit
def crc_lanes(lo, hi):
    return crc_lane(crc_lane(U(0), lo), hi)


@jit
def popcount64(x):
    x = x - ((x >> U(1)) & M5)
    x = (x & M3) + ((x >> U(2)) & M3)
    x = (x + (x >> U(4))) & MF
    return (x * ONES8) >> U(56)


if trailing_zeros is not None:

    @jit
    def lowest_bit(x):
        return trailing_zeros(x)

else:  # pragma: no cover

    @jit
    def lowest_bit(x):
        return popcount64((x & (~x + U(1))) - U(1))


@jit
def load_lanes(buf, off):
    """Unaligned 16-byte load from a uint8 array (used on patterns only)."""
    lo = U(0)
    hi = U(0)
    for b in range(8):
        lo |= U(buf[off + b]) << U(8 * b)
        hi |= U(buf[off + 8 + b]) << U(8 * b)
    return lo, hi


@nb.njit(cache=True)
def _positions(r):
    out = np.empty(16, dtype=np.int64)
    cnt = 0
    while r:
        out[cnt] = lowest_bit(r)
        cnt += 1
        r &= r - U(1)
    return out[:cnt]


@nb.njit(cache=True)
def _wscmp(alo, ahi, blo, bhi):
    return wscmp_lanes(alo, ahi, blo, bhi)


@nb.njit(cache=True)
def _match_exact(lo, hi, b, k):
    return match_exact_lanes(lo, hi, b, k)


@nb.njit(cache=True)
def _filter4(lo, hi, b32):
    return filter4_lanes(lo, hi, b32)


@nb.njit(cache=True)
def _crc(lo, hi):
    return crc_lanes(lo, hi)


@nb.njit(cache=True)
def _popcount(x):
    return popcount64(x)


@nb.njit(cache=True)
def crc_blocks(lanes):
    """wscrc of every 16-byte block in a uint64 lane array."""
    nb_ = lanes.shape[0] // 2
    out = np.empty(nb_, dtype=np.uint64)
    for i in range(nb_):
        out[i] = crc_lanes(lanes[2 * i], lanes[2 * i + 1])
    return out


def to_lanes(a: Word):
    v = a.to_int()
    return U(v & M64), U(v >> 64)


def from_lanes(lo, hi) -> Word:
    return Word.from_int(int(lo) | (int(hi) << 64), SSE_CONFIG)


class SimdBackend:
    """Packed instructions at w=128, gamma=8 backed by compiled SWAR code."""

    name = "simd"
    config = SSE_CONFIG

    def __repr__(self):
        return "SimdBackend()"

    def _check(self, *words):
        for x in words:
            if x.config != SSE_CONFIG:
                raise UsageError(f"simd backend needs w=128, gamma=8 words, got {x.config}")

    def load(self, data, offset=0) -> Word:
        return Word.from_bytes(data[offset : offset + 16], SSE_CONFIG)

    def broadcast(self, c) -> Word:
        if not 0 <= c < 256:
            raise UsageError(f"character {c} does not fit in 8 bits")
        lane = bcast_lane(c)
        return from_lanes(lane, lane)

    def wscmp(self, a, b) -> BlockMask:
        self._check(a, b)
        return BlockMask(int(_wscmp(*to_lanes(a), *to_lanes(b))), 16)

    def wsmatch_exact(self, a, b, k=None) -> BlockMask:
        self._check(a)
        k = _check_short_string(b, k, 16)
        arr = np.frombuffer(bytes(b[:k]), dtype=np.uint8)
        return BlockMask(int(_match_exact(*to_lanes(a), arr, k)), 16)

    def wsmatch_filter4(self, a, b, k=None) -> BlockMask:
        self._check(a)
        k = _check_short_string(b, k, 16)
        if k < 4:
            raise UsageError(f"wsmatch_filter4 needs k >= 4, got {k}")
        b32 = U(int.from_bytes(bytes(b[:4]), "little"))
        return BlockMask(int(_filter4(*to_lanes(a), b32)), 16)

    def wsblend(self, a, b) -> Word:
        self._check(a, b)
        _, ahi = to_lanes(a)
        blo, _ = to_lanes(b)
        return from_lanes(ahi, blo)

    def wscrc(self, a) -> int:
        self._check(a)
        return int(_crc(*to_lanes(a)))

    def mask_positions(self, r: BlockMask) -> list:
        if r.alpha != 16:
            return mask_positions(r)
        return _positions(U(r.bits)).tolist()

    def popcount(self, r: BlockMask) -> int:
        return int(_popcount(U(r.bits)))
