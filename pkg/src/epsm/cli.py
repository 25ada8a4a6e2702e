"""Command line front end: ``epsm gen | search | bench | selftest``.

Exit codes: 0 success, 1 pattern not found (search) or self-test mismatch,
2 usage error, 3 runtime error (I/O, benchmark disagreement).
"""
from __future__ import annotations

import argparse
import codecs
import logging
import random
import sys
from pathlib import Path

from . import baselines, bench, core
from .errors import IntegrityError, UsageError
from .oracles import crc32c_bitwise, find_all
from .packed_word import SSE_CONFIG, ReferenceBackend, Word, get_backend

EXIT_OK, EXIT_NOT_FOUND, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3

SEARCH_ALGOS = ("epsm", "epsm_a", "epsm_b", "epsm_c", "naive", "shift_or", "sbndm_q")

log = logging.getLogger("epsm")


def decode_pattern(text: str) -> bytes:
    r"""Literal pattern with backslash escapes (``\xNN``, ``\n``, ``\\``) decoded to bytes."""
    try:
        return codecs.escape_decode(text.encode("utf-8"))[0]
    except ValueError as exc:
        raise UsageError(f"bad escape in pattern {text!r}: {exc}") from exc


def _int_list(value: str) -> tuple:
    try:
        return tuple(int(v) for v in value.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}")


def _name_list(value: str) -> tuple:
    return tuple(v.strip() for v in value.split(",") if v.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="epsm", description="Exact packed string matching.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a synthetic corpus file")
    g.add_argument("--kind", choices=("genome", "protein", "english"), default="genome")
    g.add_argument("--size", type=int, default=bench.DEFAULT_SIZE)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--source", help="english: take text from this file instead of generating it")
    g.add_argument("--out", required=True)

    s = sub.add_parser("search", help="report occurrences of a pattern in a file")
    s.add_argument("text", help="text file (raw bytes)")
    s.add_argument("pattern", help=r"pattern literal; \xNN escapes allowed")
    s.add_argument("--algo", choices=SEARCH_ALGOS, default="epsm")
    s.add_argument("--mode", choices=("count", "positions"), default="count")
    s.add_argument("--q", type=int, default=2, help="q-gram size for sbndm_q")
    s.add_argument("--backend", choices=("simd", "reference"), default=None)

    b = sub.add_parser("bench", help="time algorithms over random patterns")
    src = b.add_mutually_exclusive_group()
    src.add_argument("--text", help="corpus file (raw bytes)")
    src.add_argument("--gen", type=_name_list, default=("genome",),
                     help="comma list of generated corpora: genome, protein, english")
    b.add_argument("--size", type=int, default=bench.DEFAULT_SIZE)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--lengths", type=_int_list, default=bench.DEFAULT_LENGTHS)
    b.add_argument("--patterns", type=int, default=100)
    b.add_argument("--algos", type=_name_list, default=bench.DEFAULT_ALGOS)
    b.add_argument("--reps", type=int, default=1)
    b.add_argument("--q", type=int, default=2)
    b.add_argument("--backend", choices=("simd", "reference"), default=None)
    b.add_argument("--csv", help="write the csv report here ('-' for stdout)")

    t = sub.add_parser("selftest", help="backend and oracle equivalence sweeps")
    t.add_argument("--trials", type=int, default=1000)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--backend", choices=("simd", "reference"), default=None)
    return parser


def cmd_gen(args) -> int:
    spec = bench.CorpusSpec(kind=args.kind, size=args.size, seed=args.seed, path=args.source)
    text = bench.generate_corpus(spec)
    Path(args.out).write_bytes(text.data)
    log.info("wrote %d bytes to %s", text.n, args.out)
    return EXIT_OK


def _searcher(algo, q, backend):
    be = get_backend(backend)
    return {
        "epsm": lambda p, t: core.search(p, t, be),
        "epsm_a": lambda p, t: core.epsm_a(p, t, be),
        "epsm_b": lambda p, t: core.epsm_b(p, t, be),
        "epsm_c": lambda p, t: core.epsm_c(p, t, backend=be),
        "naive": baselines.naive_search,
        "shift_or": baselines.shift_or_search,
        "sbndm_q": lambda p, t: baselines.sbndm_q_search(p, t, q),
    }[algo]


def cmd_search(args) -> int:
    pattern = decode_pattern(args.pattern)
    if not pattern:
        raise UsageError("pattern must not be empty")
    data = Path(args.text).read_bytes()
    occ = _searcher(args.algo, args.q, args.backend)(pattern, data)
    if args.mode == "count":
        print(len(occ))
    else:
        for s in occ.tolist():
            print(s)
    return EXIT_OK if len(occ) else EXIT_NOT_FOUND


def cmd_bench(args) -> int:
    cfg = bench.BenchConfig(
        lengths=args.lengths, patterns_per_length=args.patterns, seed=args.seed,
        algorithms=args.algos, repetitions=args.reps, q=args.q, backend=args.backend,
    )
    if args.text:
        corpora = [(Path(args.text).name, bench.CorpusSpec("file", size=None, path=args.text))]
    else:
        corpora = [(kind, bench.CorpusSpec(kind, size=args.size, seed=args.seed)) for kind in args.gen]
    report = bench.BenchReport()
    for name, spec in corpora:
        text = bench.generate_corpus(spec)
        log.info("benchmarking %s (%d bytes)", name, text.n)
        report.rows.extend(bench.run_benchmark(text, cfg, corpus=name).rows)
    csv_text = bench.emit_report(report, "csv")
    if args.csv == "-":
        sys.stdout.write(csv_text)
    elif args.csv:
        Path(args.csv).write_text(csv_text)
    sys.stdout.write(bench.emit_report(report, "table"))
    return EXIT_OK


def run_selftest(trials: int, seed: int, backend=None, out=None) -> bool:
    """Backend-equivalence and oracle-equivalence sweeps; stops at the first mismatch."""
    out = sys.stdout if out is None else out
    if trials < 1:
        raise UsageError("trials must be >= 1")
    rng = random.Random(seed)
    ref = ReferenceBackend(SSE_CONFIG)
    fast = get_backend("simd")

    def rand_word():
        sigma = rng.choice((2, 4, 256))
        return Word(tuple(rng.randrange(sigma) for _ in range(16)))

    for trial in range(trials):
        a, b = rand_word(), rand_word()
        k = rng.randint(1, 16)
        short = bytes(a.chars[rng.randrange(17 - k):][:k]) if rng.random() < 0.5 else bytes(b.chars[:k])
        mask = ref.wscmp(a, b)
        checks = [
            ("wscmp", lambda be: be.wscmp(a, b)),
            ("wsmatch_exact", lambda be: be.wsmatch_exact(a, short)),
            ("wsblend", lambda be: be.wsblend(a, b)),
            ("wscrc", lambda be: be.wscrc(a)),
            ("broadcast", lambda be: be.broadcast(a.chars[0])),
            ("mask_positions", lambda be: be.mask_positions(mask)),
            ("popcount", lambda be: be.popcount(mask)),
        ]
        if k >= 4:
            checks.append(("wsmatch_filter4", lambda be: be.wsmatch_filter4(a, short)))
        for op, call in checks:
            want, got = call(ref), call(fast)
            if want != got:
                print(f"MISMATCH backend op={op} trial={trial}", file=out)
                print(f"  a={bytes(a.chars).hex()} b={bytes(b.chars).hex()} short={short.hex()}", file=out)
                print(f"  reference={want} simd={got}", file=out)
                return False
        if fast.wscrc(a) != crc32c_bitwise(bytes(a.chars)):
            print(f"MISMATCH wscrc vs bit-serial CRC-32C trial={trial} a={bytes(a.chars).hex()}", file=out)
            return False
    print(f"backend equivalence: {trials} trials ok", file=out)

    be = get_backend(backend)
    algos = [
        ("search", 1, lambda p, t: core.search(p, t, be)),
        ("epsm_a", 1, lambda p, t: core.epsm_a(p, t, be)),
        ("epsm_b", 4, lambda p, t: core.epsm_b(p, t, be)),
        ("epsm_c", 32, lambda p, t: core.epsm_c(p, t, backend=be)),
        ("naive", 1, baselines.naive_search),
        ("shift_or", 1, baselines.shift_or_search),
        ("sbndm_q", 2, lambda p, t: baselines.sbndm_q_search(p, t, 2)),
    ]
    for trial in range(trials):
        sigma = rng.choice((2, 4, 20, 64, 256))
        n = rng.choice((0, 1, 15, 16, 17, 100, 1000))
        m = rng.randint(1, 64)
        t = bytes(rng.randrange(sigma) for _ in range(n))
        if m <= n and rng.random() < 0.7:
            s = rng.randint(0, n - m)
            p = t[s : s + m]
        else:
            p = bytes(rng.randrange(sigma) for _ in range(m))
        want = find_all(p, t)
        for name, min_m, fn in algos:
            if m < min_m:
                continue
            got = fn(p, t).tolist()
            if got != want:
                print(f"MISMATCH algo={name} trial={trial} backend={be.name}", file=out)
                print(f"  p={p.hex()} (m={m})", file=out)
                print(f"  t={t.hex()} (n={n})", file=out)
                print(f"  expected={want}", file=out)
                print(f"  got={got}", file=out)
                return False
    print(f"oracle equivalence: {trials} trials ok ({be.name} backend)", file=out)
    return True


def cmd_selftest(args) -> int:
    ok = run_selftest(args.trials, args.seed, args.backend)
    return EXIT_OK if ok else EXIT_NOT_FOUND


COMMANDS = {"gen": cmd_gen, "search": cmd_search, "bench": cmd_bench, "selftest": cmd_selftest}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"epsm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, IntegrityError) as exc:
        print(f"epsm: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
