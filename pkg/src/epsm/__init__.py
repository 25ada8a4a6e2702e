"""Exact packed string matching (EPSMa / EPSMb / EPSMc) over word-size packed instructions."""
from .baselines import BaselineConfig, naive_search, sbndm_q_search, shift_or_search
from .core import (
    BroadcastTable,
    FingerprintTable,
    Pattern,
    ScanPlan,
    Text,
    build_broadcast_table,
    build_fingerprint_table,
    epsm_a,
    epsm_b,
    epsm_c,
    kernel_for,
    scan_plan,
    search,
    verify,
)
from .errors import IntegrityError, UsageError
from .packed_word import BlockMask, ReferenceBackend, Word, WordConfig, get_backend, mask_positions, popcount

__version__ = "0.1.0"
