"""Benchmark protocol: corpora, random pattern extraction, timed runs, reports.

Each (algorithm, m) row times every extracted pattern separately, including
all per-pattern preprocessing, and averages over the pattern set. Timing is
sequential on the calling thread; each algorithm gets one untimed warm-up
call so that JIT compilation never lands in a measurement.
"""
from __future__ import annotations

import csv
import io
import logging
import re
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import baselines, core
from .errors import IntegrityError, UsageError

log = logging.getLogger(__name__)

GENOME = b"ACGT"
PROTEIN = b"ACDEFGHIKLMNPQRSTVWY"
DEFAULT_SIZE = 1 << 20
DEFAULT_LENGTHS = (2, 4, 6, 8, 12, 16, 20, 24, 28, 32)
DEFAULT_ALGOS = ("epsm", "naive", "shift_or", "sbndm_q")
CSV_COLUMNS = ["corpus", "algo", "m", "patterns", "mean_ms", "median_ms", "total_occ", "checksum"]
CORPUS_KINDS = ("genome", "protein", "english", "file")

# Common English words, most frequent first; sampled with Zipf weights.
ENGLISH_WORDS = (
    "the of and to a in is it that was he for on are as with his they at be this from I have or "
    "by one had not but what all were when we there can an your which their said if do will each "
    "about how up out them then she many some so these would other into has more her two like him "
    "see time could no make than first been its who now people my made over did down only way find "
    "use may water long little very after words called just where most know get through back much "
    "before go good new write our used me man too any day same right look think also around another "
    "came come work three word must because does part even place well such here take why things help "
    "put years different away again off went old number great tell men say small every found still "
    "between name should home big give air line set own under read last never us left end along while "
    "might next sound below saw something thought both few those always looked show large often together"
).split()


@dataclass(frozen=True)
class CorpusSpec:
    kind: str = "genome"
    size: int | None = DEFAULT_SIZE
    seed: int = 0
    path: str | None = None

    def __post_init__(self):
        if self.kind not in CORPUS_KINDS:
            raise UsageError(f"unknown corpus kind {self.kind!r}; expected one of {CORPUS_KINDS}")
        if self.size is not None and self.size < 1:
            raise UsageError(f"corpus size must be >= 1, got {self.size}")
        if self.kind == "file" and not self.path:
            raise UsageError("corpus kind 'file' needs a path")


@dataclass
class BenchConfig:
    lengths: tuple = DEFAULT_LENGTHS
    patterns_per_length: int = 100
    seed: int = 0
    algorithms: tuple = DEFAULT_ALGOS
    repetitions: int = 1
    q: int = 2
    backend: str | None = None

    def __post_init__(self):
        if self.patterns_per_length < 1:
            raise UsageError("patterns_per_length must be >= 1")
        if self.repetitions < 1:
            raise UsageError("repetitions must be >= 1")
        if any(m < 1 for m in self.lengths):
            raise UsageError("pattern lengths must be >= 1")
        for name in self.algorithms:
            _algorithm(name, self)


@dataclass
class BenchRow:
    corpus: str
    algo: str
    m: int
    patterns: int
    mean_ms: float | None = None
    median_ms: float | None = None
    total_occ: int | None = None
    checksum: int | None = None

    @property
    def supported(self) -> bool:
        return self.mean_ms is not None


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def row(self, corpus, algo, m) -> BenchRow:
        for r in self.rows:
            if (r.corpus, r.algo, r.m) == (corpus, algo, m):
                return r
        raise KeyError((corpus, algo, m))


def _english(size: int, rng: np.random.Generator) -> bytes:
    words = np.array(ENGLISH_WORDS, dtype=object)
    weights = 1.0 / np.arange(1, len(words) + 1)
    weights /= weights.sum()
    out = []
    length = 0
    capital = True
    while length < size:
        picks = rng.choice(len(words), size=4096, p=weights)
        marks = rng.random(4096)
        for idx, mark in zip(picks, marks):
            w = words[idx]
            if capital:
                w = w[:1].upper() + w[1:]
                capital = False
            if mark < 0.06:
                w += "."
                capital = True
            elif mark < 0.12:
                w += ","
            sep = "\n" if mark > 0.985 else " "
            out.append(w + sep)
            length += len(w) + 1
    return "".join(out).encode("ascii")[:size]


def generate_corpus(spec: CorpusSpec) -> core.Text:
    """Deterministic corpus bytes for ``spec`` (files are read, optionally truncated)."""
    if spec.kind == "file" or (spec.kind == "english" and spec.path):
        try:
            data = Path(spec.path).read_bytes()
        except OSError as exc:
            raise OSError(f"cannot read corpus file {spec.path}: {exc}") from exc
        if spec.size is not None:
            data = data[: spec.size]
        return core.Text(data)
    size = DEFAULT_SIZE if spec.size is None else spec.size
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "english":
        return core.Text(_english(size, rng))
    alphabet = np.frombuffer(GENOME if spec.kind == "genome" else PROTEIN, dtype=np.uint8)
    return core.Text(rng.choice(alphabet, size=size).tobytes())


def extract_patterns(t, m: int, count: int, seed: int = 0) -> list:
    """``count`` substrings of length ``m`` at independent uniform starts (duplicates allowed)."""
    data = t.data if isinstance(t, core.Text) else bytes(t)
    n = len(data)
    if m < 1 or m > n:
        raise UsageError(f"cannot extract length-{m} patterns from a text of length {n}")
    if count < 1:
        raise UsageError("pattern count must be >= 1")
    rng = np.random.default_rng([seed, m])
    starts = rng.integers(0, n - m, size=count, endpoint=True)
    return [data[s : s + m] for s in starts.tolist()]


_MASK64 = np.uint64(0xFFFFFFFFFFFFFFFF)


def occurrence_checksum(positions) -> int:
    """Order-independent 64-bit digest of a position set (splitmix64 finaliser, summed)."""
    x = (np.asarray(positions, dtype=np.uint64) + np.uint64(1)) * np.uint64(0x9E3779B97F4A7C15)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    x = x ^ (x >> np.uint64(31))
    return int(np.bitwise_and(x.sum(dtype=np.uint64), _MASK64))


def _algorithm(name: str, cfg: BenchConfig):
    """Return ``(search, supports)`` for an algorithm name."""
    if name == "epsm":
        backend = core.get_backend(cfg.backend)
        return (lambda p, t: core.search(p, t, backend)), (lambda m: True)
    if name == "naive":
        return baselines.naive_search, (lambda m: True)
    if name == "shift_or":
        return baselines.shift_or_search, (lambda m: m <= baselines.WORD_BITS)
    match = re.fullmatch(r"sbndm_q(\d*)", name)
    if match:
        q = int(match.group(1)) if match.group(1) else cfg.q
        if q < 1:
            raise UsageError(f"q must be >= 1 in {name!r}")
        return (lambda p, t: baselines.sbndm_q_search(p, t, q)), (lambda m: q <= m <= baselines.WORD_BITS)
    raise UsageError(f"unknown algorithm {name!r}; expected epsm, naive, shift_or or sbndm_q[<q>]")


def run_benchmark(t, cfg: BenchConfig, corpus: str = "corpus") -> BenchReport:
    text = t if isinstance(t, core.Text) else core.Text(t)
    for m in cfg.lengths:
        if m > text.n:
            raise UsageError(f"pattern length {m} exceeds corpus size {text.n}")
    report = BenchReport()
    for m in cfg.lengths:
        patterns = extract_patterns(text, m, cfg.patterns_per_length, cfg.seed)
        rows = []
        for name in cfg.algorithms:
            fn, supports = _algorithm(name, cfg)
            row = BenchRow(corpus, name, m, len(patterns))
            if supports(m):
                _measure(fn, patterns, text, cfg.repetitions, row)
            else:
                log.info("%s does not support m=%d; row left empty", name, m)
            rows.append(row)
        _check_agreement(rows)
        report.rows.extend(rows)
    return report


def _measure(fn, patterns, text, reps, row):
    fn(patterns[0], text)  # warm-up: JIT compilation, caches
    times = []
    total = 0
    digest = 0
    clock = time.perf_counter_ns
    for p in patterns:
        runs = []
        for _ in range(reps):
            start = clock()
            occ = fn(p, text)
            runs.append(clock() - start)
        times.append(statistics.median(runs) / 1e6)
        total += len(occ)
        digest = (digest + occurrence_checksum(occ)) & 0xFFFFFFFFFFFFFFFF
    row.mean_ms = statistics.fmean(times)
    row.median_ms = statistics.median(times)
    row.total_occ = total
    row.checksum = digest


def _check_agreement(rows):
    seen = {(r.total_occ, r.checksum) for r in rows if r.supported}
    if len(seen) > 1:
        detail = ", ".join(f"{r.algo}: occ={r.total_occ} sum={r.checksum:#x}" for r in rows if r.supported)
        raise IntegrityError(f"algorithms disagree on {rows[0].corpus} m={rows[0].m}: {detail}")


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_report(report: BenchReport, fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in report.rows:
            writer.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
        return buf.getvalue()
    if fmt == "table":
        return render_table(report)
    raise UsageError(f"unknown report format {fmt!r}")


def render_table(report: BenchReport) -> str:
    """One block per corpus: a row per algorithm, a column per m, mean ms per cell."""
    blocks = []
    corpora = list(dict.fromkeys(r.corpus for r in report.rows))
    for corpus in corpora:
        rows = [r for r in report.rows if r.corpus == corpus]
        lengths = sorted({r.m for r in rows})
        algos = list(dict.fromkeys(r.algo for r in rows))
        cells = {(r.algo, r.m): ("-" if not r.supported else f"{r.mean_ms:.3f}") for r in rows}
        width = max(8, *(len(a) for a in algos))
        lines = [f"{corpus} (mean ms per pattern, preprocessing included)"]
        lines.append(f"{'m':<{width}}" + "".join(f"{m:>10}" for m in lengths))
        for a in algos:
            lines.append(f"{a:<{width}}" + "".join(f"{cells.get((a, m), ''):>10}" for m in lengths))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def parse_csv(text: str) -> BenchReport:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is not None and list(reader.fieldnames) != CSV_COLUMNS:
        raise UsageError(f"unexpected csv header {reader.fieldnames}")
    report = BenchReport()
    for rec in reader:
        report.rows.append(
            BenchRow(
                corpus=rec["corpus"],
                algo=rec["algo"],
                m=int(rec["m"]),
                patterns=int(rec["patterns"]),
                mean_ms=float(rec["mean_ms"]) if rec["mean_ms"] else None,
                median_ms=float(rec["median_ms"]) if rec["median_ms"] else None,
                total_occ=int(rec["total_occ"]) if rec["total_occ"] else None,
                checksum=int(rec["checksum"]) if rec["checksum"] else None,
            )
        )
    return report
