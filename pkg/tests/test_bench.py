import numpy as np
import pytest

from epsm import bench
from epsm.bench import BenchConfig, BenchReport, BenchRow, CorpusSpec
from epsm.errors import IntegrityError, UsageError
from epsm.oracles import find_all


@pytest.fixture(scope="module")
def genome():
    return bench.generate_corpus(CorpusSpec("genome", 20_000, seed=3))


class TestCorpus:
    def test_deterministic(self):
        a = bench.generate_corpus(CorpusSpec("genome", 64, seed=1))
        b = bench.generate_corpus(CorpusSpec("genome", 64, seed=1))
        assert a.data == b.data and a.n == 64

    def test_seed_changes_bytes(self):
        a = bench.generate_corpus(CorpusSpec("protein", 256, seed=1))
        b = bench.generate_corpus(CorpusSpec("protein", 256, seed=2))
        assert a.data != b.data

    def test_genome_histogram(self):
        t = bench.generate_corpus(CorpusSpec("genome", 10**6, seed=7))
        assert set(np.unique(np.frombuffer(t.data, np.uint8)).tolist()) == set(b"ACGT")

    def test_protein_histogram(self):
        t = bench.generate_corpus(CorpusSpec("protein", 10**6, seed=7))
        values = set(np.unique(np.frombuffer(t.data, np.uint8)).tolist())
        assert len(values) <= 20 and values <= set(bench.PROTEIN)

    def test_english(self):
        t = bench.generate_corpus(CorpusSpec("english", 5000, seed=0))
        assert t.n == 5000
        text = t.data.decode("ascii")
        assert " the " in text.lower()
        assert t.data == bench.generate_corpus(CorpusSpec("english", 5000, seed=0)).data

    def test_file(self, tmp_path):
        path = tmp_path / "c.bin"
        path.write_bytes(b"hello world")
        assert bench.generate_corpus(CorpusSpec("file", None, path=str(path))).data == b"hello world"
        assert bench.generate_corpus(CorpusSpec("file", 5, path=str(path))).data == b"hello"
        assert bench.generate_corpus(CorpusSpec("english", None, path=str(path))).data == b"hello world"

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(OSError):
            bench.generate_corpus(CorpusSpec("file", None, path=str(tmp_path / "missing")))

    def test_bad_specs(self):
        with pytest.raises(UsageError):
            CorpusSpec("bogus")
        with pytest.raises(UsageError):
            CorpusSpec("genome", 0)
        with pytest.raises(UsageError):
            CorpusSpec("file", None)


class TestExtraction:
    def test_repeatable(self, genome):
        assert bench.extract_patterns(genome, 8, 1, seed=4) == bench.extract_patterns(genome, 8, 1, seed=4)

    def test_patterns_occur(self, genome):
        for p in bench.extract_patterns(genome, 12, 50, seed=1):
            assert find_all(p, genome.data)

    def test_counts_and_lengths(self):
        t = bench.generate_corpus(CorpusSpec("genome", 1 << 20, seed=0))
        pats = bench.extract_patterns(t, 8, 1000, seed=0)
        assert len(pats) == 1000 and all(len(p) == 8 for p in pats)

    def test_whole_text(self):
        assert bench.extract_patterns(b"abc", 3, 2) == [b"abc", b"abc"]

    def test_errors(self, genome):
        with pytest.raises(UsageError):
            bench.extract_patterns(b"abc", 4, 1)
        with pytest.raises(UsageError):
            bench.extract_patterns(genome, 4, 0)


def test_checksum_is_order_independent():
    assert bench.occurrence_checksum([3, 1, 2]) == bench.occurrence_checksum([1, 2, 3])
    assert bench.occurrence_checksum([]) == 0
    assert bench.occurrence_checksum([1, 2]) != bench.occurrence_checksum([1, 3])


class TestRunBenchmark:
    def test_row_count_and_agreement(self, genome):
        cfg = BenchConfig(lengths=(2, 8, 40, 70), patterns_per_length=5, algorithms=bench.DEFAULT_ALGOS)
        report = bench.run_benchmark(genome, cfg, corpus="g")
        assert len(report) == 4 * 4
        for m in cfg.lengths:
            rows = [r for r in report.rows if r.m == m and r.supported]
            assert len({(r.total_occ, r.checksum) for r in rows}) == 1
            assert rows[0].total_occ >= 5

    def test_unsupported_rows(self, genome):
        cfg = BenchConfig(lengths=(2, 70), patterns_per_length=2, algorithms=("naive", "shift_or", "sbndm_q4"))
        report = bench.run_benchmark(genome, cfg, corpus="g")
        assert not report.row("g", "shift_or", 70).supported
        assert not report.row("g", "sbndm_q4", 2).supported
        assert report.row("g", "sbndm_q4", 70).supported is False
        assert report.row("g", "naive", 70).supported

    def test_statistics_reproducible(self, genome):
        cfg = BenchConfig(lengths=(6,), patterns_per_length=10, seed=9, algorithms=("epsm", "naive"))
        a = bench.run_benchmark(genome, cfg)
        b = bench.run_benchmark(genome, cfg)
        assert [(r.total_occ, r.checksum) for r in a.rows] == [(r.total_occ, r.checksum) for r in b.rows]

    def test_disagreement_fails(self, genome, monkeypatch):
        real = bench._algorithm

        def broken(name, cfg):
            fn, supports = real(name, cfg)
            if name == "naive":
                return (lambda p, t: fn(p, t)[1:]), supports
            return fn, supports

        monkeypatch.setattr(bench, "_algorithm", broken)
        cfg = BenchConfig(lengths=(4,), patterns_per_length=3, algorithms=("epsm", "naive"))
        with pytest.raises(IntegrityError):
            bench.run_benchmark(genome, cfg)

    def test_config_errors(self, genome):
        with pytest.raises(UsageError):
            BenchConfig(patterns_per_length=0)
        with pytest.raises(UsageError):
            BenchConfig(algorithms=("kmp",))
        with pytest.raises(UsageError):
            bench.run_benchmark(b"short", BenchConfig(lengths=(8,), patterns_per_length=1))


class TestReport:
    def test_empty_report(self):
        assert bench.emit_report(BenchReport(), "csv") == ",".join(bench.CSV_COLUMNS) + "\n"

    def test_one_row(self):
        report = BenchReport([BenchRow("g", "naive", 4, 10, 0.5, 0.25, 12, 99)])
        lines = bench.emit_report(report).splitlines()
        assert len(lines) == 2
        assert lines[1] == "g,naive,4,10,0.5,0.25,12,99"

    def test_round_trip(self, genome):
        cfg = BenchConfig(lengths=(2, 70), patterns_per_length=3, algorithms=("epsm", "shift_or"))
        report = bench.run_benchmark(genome, cfg, corpus="g")
        assert bench.parse_csv(bench.emit_report(report, "csv")) == report

    def test_table_matches_csv(self, genome):
        cfg = BenchConfig(lengths=(4, 8), patterns_per_length=3, algorithms=("epsm", "naive"))
        report = bench.parse_csv(bench.emit_report(bench.run_benchmark(genome, cfg, corpus="g")))
        lines = bench.emit_report(report, "table").splitlines()
        assert lines[0].startswith("g ")
        assert lines[1].split() == ["m", "4", "8"]
        for line in lines[2:]:
            algo, *cells = line.split()
            assert [float(c) for c in cells] == [round(report.row("g", algo, m).mean_ms, 3) for m in (4, 8)]

    def test_bad_header(self):
        with pytest.raises(UsageError):
            bench.parse_csv("a,b\n1,2\n")

    def test_bad_format(self):
        with pytest.raises(UsageError):
            bench.emit_report(BenchReport(), "json")
