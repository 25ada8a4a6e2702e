"""CRC-32C (Castagnoli) tables and table-driven updates.

Both backends compute the raw register update used by the SSE4.2 ``crc32``
instruction: no pre- or post-inversion, so the caller supplies the initial
accumulator (0 for block fingerprints).
"""
import numpy as np

POLY = 0x82F63B78  # reflected Castagnoli polynomial


def _make_tables(slices=8):
    tables = np.zeros((slices, 256), dtype=np.uint32)
    for byte in range(256):
        crc = byte
        for _ in range(8):
            crc = (crc >> 1) ^ (POLY if crc & 1 else 0)
        tables[0, byte] = crc
    for s in range(1, slices):
        prev = tables[s - 1]
        tables[s] = (prev >> 8) ^ tables[0][prev & 0xFF]
    return tables


TABLES = _make_tables()
BYTE_TABLE = [int(v) for v in TABLES[0]]


def crc32c_update(crc, data):
    """Byte-at-a-time update of a raw CRC-32C register."""
    crc &= 0xFFFFFFFF
    for byte in data:
        crc = (crc >> 8) ^ BYTE_TABLE[(crc ^ byte) & 0xFF]
    return crc


def crc32c(data):
    """Standard CRC-32C checksum (init and final xor 0xFFFFFFFF)."""
    return crc32c_update(0xFFFFFFFF, data) ^ 0xFFFFFFFF
