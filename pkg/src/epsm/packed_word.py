"""Word-size packed instructions.

A :class:`Word` is a block of ``alpha`` characters of ``gamma`` bits each.
Character ``i`` occupies bits ``[i*gamma, (i+1)*gamma)`` of the word's integer
value, so for the 128-bit / 8-bit layout the integer is simply the 16 bytes
read little-endian. A :class:`BlockMask` has bit ``i`` set for character
offset ``i``.

Two backends expose the same instruction set:

* :class:`ReferenceBackend` works on arbitrary-precision integers and is
  generic over ``(w, gamma)``; it is slow but portable and small enough to
  audit.
* :class:`epsm.simd.SimdBackend` is fixed at ``w=128, gamma=8`` and runs
  compiled SWAR code over two 64-bit lanes.

:func:`get_backend` picks one by name, honouring ``EPSM_BACKEND``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

from .crc import crc32c_update
from .errors import UsageError

BACKEND_ENV = "EPSM_BACKEND"


@dataclass(frozen=True)
class WordConfig:
    w: int = 128
    gamma: int = 8

    def __post_init__(self):
        if self.w <= 0 or self.gamma <= 0:
            raise UsageError("word and character widths must be positive")
        if self.w % self.gamma:
            raise UsageError(f"gamma={self.gamma} does not divide w={self.w}")
        if self.alpha % 2:
            raise UsageError(f"alpha={self.alpha} must be even")

    @property
    def alpha(self) -> int:
        return self.w // self.gamma

    @property
    def sigma(self) -> int:
        return 1 << self.gamma

    @property
    def word_mask(self) -> int:
        return (1 << self.w) - 1

    @property
    def char_mask(self) -> int:
        return (1 << self.gamma) - 1


SSE_CONFIG = WordConfig(128, 8)


@dataclass(frozen=True)
class Word:
    chars: tuple
    config: WordConfig = SSE_CONFIG

    def __post_init__(self):
        chars = tuple(int(c) for c in self.chars)
        object.__setattr__(self, "chars", chars)
        if len(chars) != self.config.alpha:
            raise UsageError(f"word needs {self.config.alpha} characters, got {len(chars)}")
        top = self.config.sigma
        if any(c < 0 or c >= top for c in chars):
            raise UsageError(f"character does not fit in {self.config.gamma} bits")

    @classmethod
    def from_bytes(cls, data, config: WordConfig = SSE_CONFIG) -> "Word":
        """Build a word from a sequence of character codes, zero-padding short input."""
        chars = list(data[: config.alpha])
        chars += [0] * (config.alpha - len(chars))
        return cls(tuple(chars), config)

    @classmethod
    def from_int(cls, value: int, config: WordConfig = SSE_CONFIG) -> "Word":
        g, cm = config.gamma, config.char_mask
        return cls(tuple((value >> (i * g)) & cm for i in range(config.alpha)), config)

    def to_int(self) -> int:
        g = self.config.gamma
        value = 0
        for i, c in enumerate(self.chars):
            value |= c << (i * g)
        return value

    def to_bytes(self) -> bytes:
        """Little-endian image of the word, ``w/8`` bytes long."""
        return self.to_int().to_bytes((self.config.w + 7) // 8, "little")

    def __len__(self):
        return self.config.alpha


@dataclass(frozen=True)
class BlockMask:
    bits: int
    alpha: int = 16

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.alpha:
            raise UsageError(f"mask {self.bits:#x} has bits beyond alpha={self.alpha}")

    @classmethod
    def from_positions(cls, positions, alpha: int = 16) -> "BlockMask":
        bits = 0
        for i in positions:
            bits |= 1 << i
        return cls(bits, alpha)

    def __contains__(self, offset):
        return 0 <= offset < self.alpha and bool(self.bits >> offset & 1)

    def __str__(self):
        # r_0 r_1 ... r_{alpha-1}, offset 0 first
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.alpha))


def mask_positions(r: BlockMask) -> list:
    """Offsets of the set bits of ``r`` in increasing order (O(popcount))."""
    out = []
    bits = r.bits
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


def popcount(r: BlockMask) -> int:
    return r.bits.bit_count()


def _check_short_string(b, k, alpha, sigma=256):
    if k is None:
        k = len(b)
    if k < 1 or k > alpha:
        raise UsageError(f"short string length k={k} outside 1..{alpha}")
    if len(b) < k:
        raise UsageError(f"short string has {len(b)} characters, k={k}")
    if any(c < 0 or c >= sigma for c in b[:k]):
        raise UsageError(f"short string character outside 0..{sigma - 1}")
    return k


class ReferenceBackend:
    """Portable packed instructions over Python integers.

    Comparisons use the generic SWAR zero-lane test, so the code path is the
    same word-RAM algorithm for every ``(w, gamma)``.
    """

    name = "reference"

    def __init__(self, config: WordConfig = SSE_CONFIG):
        self.config = config
        g, a = config.gamma, config.alpha
        self._ones = sum(1 << (i * g) for i in range(a))
        self._high = self._ones << (g - 1)
        self._low = self._ones * ((1 << (g - 1)) - 1)

    def __repr__(self):
        return f"ReferenceBackend(w={self.config.w}, gamma={self.config.gamma})"

    def _check(self, *words):
        for x in words:
            if x.config != self.config:
                raise UsageError(f"word config {x.config} does not match backend {self.config}")

    def _zero_lanes(self, x: int) -> int:
        y = ((x & self._low) + self._low) | x
        z = ~y & self._high
        out = 0
        g = self.config.gamma
        while z:
            low = z & -z
            out |= 1 << ((low.bit_length() - 1) // g)
            z ^= low
        return out

    def load(self, data, offset: int = 0) -> Word:
        return Word.from_bytes(data[offset : offset + self.config.alpha], self.config)

    def broadcast(self, c: int) -> Word:
        if c < 0 or c >= self.config.sigma:
            raise UsageError(f"character {c} does not fit in {self.config.gamma} bits")
        return Word.from_int(self._ones * c, self.config)

    def wscmp(self, a: Word, b: Word) -> BlockMask:
        self._check(a, b)
        return BlockMask(self._zero_lanes(a.to_int() ^ b.to_int()), self.config.alpha)

    def wsmatch_exact(self, a: Word, b: Sequence[int], k: int | None = None) -> BlockMask:
        self._check(a)
        alpha = self.config.alpha
        k = _check_short_string(b, k, alpha, self.config.sigma)
        packed = a.to_int()
        r = (1 << alpha) - 1
        for j in range(k):
            s = self._zero_lanes(packed ^ (self._ones * b[j]))
            r &= s >> j
        return BlockMask(r, alpha)

    def wsmatch_filter4(self, a: Word, b: Sequence[int], k: int | None = None) -> BlockMask:
        """Sum-of-absolute-differences filter on the 4-character prefix of ``b``.

        Evaluates start offsets ``0 .. alpha/2 - 1``; offsets whose 4-character
        window would leave the word stay clear.
        """
        self._check(a)
        alpha = self.config.alpha
        k = _check_short_string(b, k, alpha, self.config.sigma)
        if k < 4:
            raise UsageError(f"wsmatch_filter4 needs k >= 4, got {k}")
        chars = a.chars
        r = 0
        for i in range(min(alpha // 2, alpha - 3)):
            sad = sum(abs(chars[i + j] - b[j]) for j in range(4))
            if sad == 0:
                r |= 1 << i
        return BlockMask(r, alpha)

    def wsblend(self, a: Word, b: Word) -> Word:
        self._check(a, b)
        half = self.config.w // 2
        low = (1 << half) - 1
        return Word.from_int((a.to_int() >> half) | ((b.to_int() & low) << half), self.config)

    def wscrc(self, a: Word) -> int:
        self._check(a)
        if self.config.w % 8:
            raise UsageError("wscrc needs a whole number of bytes per word")
        return crc32c_update(0, a.to_bytes())

    mask_positions = staticmethod(mask_positions)
    popcount = staticmethod(popcount)


def get_backend(name: str | None = None, config: WordConfig | None = None):
    """Return a backend instance.

    ``name`` defaults to ``$EPSM_BACKEND`` and then to ``"simd"``. A
    non-default ``config`` is only accepted by the reference backend.
    """
    if name is None:
        name = os.environ.get(BACKEND_ENV, "simd")
    name = name.strip().lower()
    if name == "reference":
        return ReferenceBackend(config or SSE_CONFIG)
    if name == "simd":
        if config is not None and config != SSE_CONFIG:
            raise UsageError("the simd backend only supports w=128, gamma=8")
        from .simd import SimdBackend

        return SimdBackend()
    raise UsageError(f"unknown backend {name!r} (expected 'reference' or 'simd')")
