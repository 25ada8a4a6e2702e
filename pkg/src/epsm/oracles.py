"""Slow, independent oracles used by the self-test and the test suite.

Nothing here touches numba or the packed instruction layer.
"""


def find_all(p: bytes, t: bytes) -> list:
    """Every (possibly overlapping) start of ``p`` in ``t`` via ``bytes.find``."""
    p, t = bytes(p), bytes(t)
    out = []
    if not p:
        return out
    i = t.find(p)
    while i != -1:
        out.append(i)
        i = t.find(p, i + 1)
    return out


def crc32c_bitwise(data, crc: int = 0) -> int:
    """Bit-serial CRC-32C register update (reflected 0x82F63B78, no inversion)."""
    crc &= 0xFFFFFFFF
    for byte in data:
        crc ^= byte
        for _ in range(8):
            if crc & 1:
                crc = (crc >> 1) ^ 0x82F63B78
            else:
                crc >>= 1
    return crc
