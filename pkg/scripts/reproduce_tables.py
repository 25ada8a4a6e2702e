"""Run the three-corpus benchmark (genome, protein, english) and write csv + tables.

Desk scale by default (1MB, 100 patterns per length); pass --size 4194304
--patterns 1000 for the full-size protocol.
"""
import argparse
import logging
from pathlib import Path

from epsm import bench


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=bench.DEFAULT_SIZE)
    ap.add_argument("--patterns", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--reps", type=int, default=1)
    ap.add_argument("--english", help="natural-language source file (default: generated)")
    ap.add_argument("--algos", default="epsm,naive,shift_or,sbndm_q2,sbndm_q4")
    ap.add_argument("--out", default="results")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    cfg = bench.BenchConfig(patterns_per_length=args.patterns, seed=args.seed,
                            algorithms=tuple(args.algos.split(",")), repetitions=args.reps)
    specs = {
        "genome": bench.CorpusSpec("genome", args.size, args.seed),
        "protein": bench.CorpusSpec("protein", args.size, args.seed),
        "english": bench.CorpusSpec("english", args.size, args.seed, path=args.english),
    }
    report = bench.BenchReport()
    for name, spec in specs.items():
        logging.info("%s: %d bytes", name, spec.size)
        report.rows.extend(bench.run_benchmark(bench.generate_corpus(spec), cfg, name).rows)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "tables.csv").write_text(bench.emit_report(report, "csv"))
    table = bench.emit_report(report, "table")
    (out / "tables.txt").write_text(table)
    print(table)


if __name__ == "__main__":
    main()
