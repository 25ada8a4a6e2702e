"""Bucket occupancy of the EPSMc fingerprint table for patterns drawn from each corpus.

Prints, per (corpus, m, k), the number of non-empty buckets and the largest
bucket, averaged over the sampled patterns. Low-entropy corpora put many
offsets in the same bucket, which is what drives the verification cost.
"""
import argparse
import statistics

from epsm import bench, core


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=1 << 18)
    ap.add_argument("--patterns", type=int, default=50)
    ap.add_argument("--lengths", default="32,64,128,256")
    ap.add_argument("--ks", default="8,11,14")
    args = ap.parse_args()

    print(f"{'corpus':<8} {'m':>4} {'k':>3} {'offsets':>8} {'nonempty':>9} {'max':>5}")
    for kind in ("genome", "protein", "english"):
        text = bench.generate_corpus(bench.CorpusSpec(kind, args.size, seed=1))
        for m in map(int, args.lengths.split(",")):
            pats = bench.extract_patterns(text, m, args.patterns, seed=1)
            for k in map(int, args.ks.split(",")):
                tables = [core.build_fingerprint_table(p, k) for p in pats]
                nonempty = statistics.fmean(sum(1 for b in t.buckets if b) for t in tables)
                biggest = statistics.fmean(max(len(b) for b in t.buckets) for t in tables)
                print(f"{kind:<8} {m:>4} {k:>3} {m - 15:>8} {nonempty:>9.1f} {biggest:>5.1f}")


if __name__ == "__main__":
    main()
