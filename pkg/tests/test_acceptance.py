"""Acceptance suite: one test per criterion, each printing PASS/FAIL.

Criteria and tolerances are pinned here; runtime bounds are asserted with
wall-clock checks. Run with ``pytest tests/test_acceptance.py -s`` to see
the per-criterion lines as they complete.
"""

import functools
import json
import random
import resource
import sys
import time
from pathlib import Path

import numpy as np
import pytest
import scipy.sparse as sp
from click.testing import CliRunner

import oracles
from bioident.annotation import probabilistic_sample, stratified_sample
from bioident.cli import main as cli_main
from bioident.cocluster import CoClusterConfig, spectral_cocluster
from bioident.corpus import UserRecord, load_corpus
from bioident.extractor import PhraseRecord, clean_phrase, extract_identifiers
from bioident.indexing import IdentifierIndex
from bioident.lexicon import Lexicon, meaning_comparison, overlap_curve
from bioident.rules import default_rules
from bioident.stats import (
    ReliabilityTable,
    agresti_coull_interval,
    friend_follower_ratio,
    krippendorff_alpha,
    normalized_log_odds,
    raw_log_odds,
)
from conftest import make_index
from test_extractor import GOLDEN_BIOS

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "scripts"))
from make_synthetic_corpus import generate_records  # noqa: E402


def criterion(number: int, description: str):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"criterion {number} ({description}): FAIL", flush=True)
                raise
            print(f"criterion {number} ({description}): PASS", flush=True)
        return wrapper
    return decorate


# -- 1: extraction golden suite ------------------------------------------------


@criterion(1, "extraction golden suite")
def test_criterion_1_golden_suite():
    rules = default_rules()
    assert len(GOLDEN_BIOS) >= 25
    start = time.perf_counter()
    for bio, expected in GOLDEN_BIOS:
        assert [p.text for p in extract_identifiers(bio, rules)] == expected, bio
    assert time.perf_counter() - start < 1.0


# -- 2: extraction filter laws ---------------------------------------------------


def _random_bios(n: int, seed: int) -> list[str]:
    rng = random.Random(seed)
    words = [
        "wife", "mom", "runner", "coffee", "lover", "proud", "dad", "x",
        "she/her", "#maga", "@someone", "phd", "i", "love", "am", "a", "the",
        "to", "café", "señora", "100%", "ny-14", "it's",
    ]
    punctuation = list(",.;:!?|•·~\"()[]{}…\n\r") + [
        " ", "  ", "\U0001f600", "❤️", "\U0001f3c3", "&", "-", "/",
        "！", "’", "__", "$",
    ]
    bios = []
    for _ in range(n):
        parts = []
        for _ in range(rng.randint(0, 18)):
            parts.append(rng.choice(words) if rng.random() < 0.6
                         else rng.choice(punctuation))
        bios.append("".join(parts) if rng.random() < 0.3 else " ".join(parts))
    return bios


@criterion(2, "extraction filter laws on 10^4 random bios")
def test_criterion_2_filter_laws():
    rules = default_rules()
    delimiter_chars = rules.delimiter_chars
    start = time.perf_counter()
    for bio in _random_bios(10_000, seed=20240117):
        for rec in extract_identifiers(bio, rules):
            assert 1 <= rec.token_count <= 3
            assert sum(ch.isalnum() for ch in rec.text) >= 3
            assert not set(rec.text) & delimiter_chars
            assert clean_phrase(rec.text, rules) == rec.text
    assert time.perf_counter() - start < 30.0


# -- 3: statistics oracle equivalence ---------------------------------------------


@criterion(3, "scalar statistics match independent oracles at 1e-9")
def test_criterion_3_stats_oracles():
    rng = random.Random(99)
    for _ in range(1000):
        a, b = rng.randint(0, 10**6), rng.randint(0, 10**6)
        assert raw_log_odds(a, b) == pytest.approx(oracles.raw_log_odds(a, b), abs=1e-9)
        assert friend_follower_ratio(a, b) == pytest.approx(
            oracles.friend_follower_ratio(a, b), abs=1e-9
        )
        n_a = a + rng.randint(0, 10**6)
        n_b = b + rng.randint(0, 10**6)
        prior = rng.choice([0.01, 0.1, 0.5, 1.0, 5.0])
        assert normalized_log_odds(a, b, n_a, n_b, prior) == pytest.approx(
            oracles.normalized_log_odds(a, b, n_a, n_b, prior), abs=1e-9
        )
        trials = rng.randint(1, 10**5)
        successes = rng.randint(0, trials)
        confidence = rng.choice([0.8, 0.9, 0.95, 0.99])
        est = agresti_coull_interval(successes, trials, confidence)
        point, lower, upper = oracles.agresti_coull_interval(
            successes, trials, confidence
        )
        assert est.point == pytest.approx(point, abs=1e-9)
        assert est.lower == pytest.approx(lower, abs=1e-9)
        assert est.upper == pytest.approx(upper, abs=1e-9)

    # fixed regression points from the worked examples
    assert raw_log_odds(100, 10) == pytest.approx(2.2173, abs=1.5e-4)
    assert normalized_log_odds(10, 1, 100, 100, prior=1.0) == pytest.approx(
        2.340, abs=1e-3
    )
    est = agresti_coull_interval(25, 30, 0.95)
    assert est.lower == pytest.approx(0.6596, abs=1e-4)
    assert est.upper == pytest.approx(0.9314, abs=1e-4)


# -- 4: Krippendorff's alpha --------------------------------------------------------


@criterion(4, "Krippendorff alpha exact examples and brute-force oracle")
def test_criterion_4_krippendorff():
    def table(rows):
        items = [
            (f"i{i}", {f"r{j}": lab for j, lab in enumerate(labels) if lab is not None})
            for i, labels in enumerate(rows)
        ]
        return ReliabilityTable(items=items)

    assert krippendorff_alpha(table([("a", "a"), ("b", "b"), ("c", "c")])) == 1.0
    assert krippendorff_alpha(table([("a", "b"), ("b", "a")])) == pytest.approx(
        -0.5, abs=1e-9
    )
    assert krippendorff_alpha(
        table([("a", "a"), ("a", "a"), ("b", "b"), ("a", "b")])
    ) == pytest.approx(16 / 30, abs=1e-9)

    rng = random.Random(4242)
    categories = ["yes", "no", "unclear"]
    checked = 0
    while checked < 200:
        n_items = rng.randint(2, 10)
        n_raters = rng.randint(2, 5)
        rows = [
            tuple(
                rng.choice(categories) if rng.random() > 0.35 else None
                for _ in range(n_raters)
            )
            for _ in range(n_items)
        ]
        units = [[lab for lab in row if lab is not None] for row in rows]
        if sum(len(u) for u in units if len(u) >= 2) < 2:
            continue
        expected = oracles.krippendorff_alpha_bruteforce(units)
        assert krippendorff_alpha(table(rows)) == pytest.approx(expected, abs=1e-9)
        checked += 1


# -- 5: co-clustering recovery ---------------------------------------------------------


def _planted(n_blocks, rows_per, cols_per, noise, rng):
    n_rows, n_cols = n_blocks * rows_per, n_blocks * cols_per
    dense = (rng.random((n_rows, n_cols)) < noise).astype(float)
    for blk in range(n_blocks):
        dense[blk * rows_per:(blk + 1) * rows_per,
              blk * cols_per:(blk + 1) * cols_per] = 1.0
    return dense, np.repeat(np.arange(n_blocks), rows_per)


@criterion(5, "planted co-cluster recovery, 19/20 seeds at 95% accuracy")
def test_criterion_5_cocluster_recovery():
    start = time.perf_counter()

    # exact small cases first
    biclique = np.zeros((4, 4))
    biclique[:2, :2] = 1.0
    biclique[2:, 2:] = 1.0
    result = spectral_cocluster(sp.csr_matrix(biclique), CoClusterConfig(k=2, seed=0))
    assert result.row_labels[0] == result.row_labels[1]
    assert result.row_labels[2] == result.row_labels[3]
    assert result.row_labels[0] != result.row_labels[2]
    single = spectral_cocluster(sp.csr_matrix(np.ones((3, 4))), CoClusterConfig(k=1, seed=0))
    assert (single.row_labels == 0).all() and (single.col_labels == 0).all()

    successes = 0
    for seed in range(20):
        rng = np.random.default_rng(1000 + seed)
        n_blocks = int(rng.integers(3, 6))
        rows_per = int(rng.integers(10, 51))
        cols_per = int(rng.integers(50, 201))
        noise = float(rng.uniform(0.0, 0.05))
        dense, row_truth = _planted(n_blocks, rows_per, cols_per, noise, rng)
        result = spectral_cocluster(
            sp.csr_matrix(dense), CoClusterConfig(k=n_blocks, seed=seed)
        )
        accuracy = oracles.partition_accuracy(result.row_labels, row_truth, n_blocks)
        if accuracy >= 0.95:
            successes += 1
    elapsed = time.perf_counter() - start
    assert successes >= 19, f"only {successes}/20 seeds recovered"
    assert elapsed < 60.0, f"took {elapsed:.1f}s"


# -- 6: determinism of seeded subcommands --------------------------------------------


def _run_all_subcommands(out: Path, bios: Path, lexicon: Path, shared: Path):
    """Run every subcommand with inputs read from ``shared``/``bios``."""
    runner = CliRunner()

    def run(*args):
        result = runner.invoke(cli_main, [str(a) for a in args])
        assert result.exit_code == 0, result.output

    index_path = shared / "index" / "index.tsv"
    run("extract", "--input", bios, "--output", out / "extract")
    run("index", "--input", bios, "--output", out / "index")
    run("contrast", "--index", index_path, "--attribute", "sex",
        "--top", "10", "--min-bios", "5", "--output", out / "contrast")
    run("continuous", "--index", index_path, "--attribute", "age",
        "--top", "10", "--min-bios", "5", "--output", out / "continuous")
    run("cluster", "--phrases", shared / "extract" / "phrases.tsv", "--k", "4",
        "--seed", "7", "--min-bio-count", "5", "--min-user-identifiers", "1",
        "--output", out / "cluster")
    run("overlap", "--index", index_path, "--lexicon", lexicon,
        "--min-remaining", "0", "--output", out / "overlap")
    run("meaning", "--index", index_path, "--lexicon", lexicon,
        "--resamples", "300", "--seed", "11", "--output", out / "meaning")
    run("sample-stratified", "--index", shared / "index_all" / "index.tsv",
        "--per-cell", "3", "--seed", "13", "--output", out / "strat")
    run("sample-prob", "--index", index_path, "--n", "25", "--seed", "17",
        "--output", out / "prob")
    run("reliability", "--key", shared / "strat" / "sample_stratified_key.tsv",
        "--labels", shared / "labels.tsv", "--output", out / "rel")
    run("correlate", "--index-a", index_path, "--index-b", index_path,
        "--output", out / "corr")
    run("report", "--index", index_path, "--output", out / "report")


@criterion(6, "seeded subcommands byte-identical across reruns")
def test_criterion_6_determinism(tmp_path):
    bios = tmp_path / "bios.jsonl"
    with bios.open("w", encoding="utf-8") as out:
        for record in generate_records(2500, seed=99):
            out.write(json.dumps(record, separators=(",", ":")) + "\n")
    lexicon = tmp_path / "lexicon.csv"
    lexicon.write_text(
        "term,evaluation,power\nwife,1.0,0.2\nrunner,0.5,0.9\n"
        "astronaut,0.8,0.8\nproud dad,0.9,0.4\n",
        encoding="utf-8",
    )

    # stage the shared inputs every compared run will consume
    runner = CliRunner()
    shared = tmp_path / "shared"
    for args in (
        ("extract", "--input", bios, "--output", shared / "extract"),
        ("index", "--input", bios, "--output", shared / "index"),
        ("index", "--input", bios, "--output", shared / "index_all",
         "--max-tokens", "0"),
        ("sample-stratified", "--index", shared / "index_all" / "index.tsv",
         "--per-cell", "3", "--seed", "13", "--output", shared / "strat"),
    ):
        result = runner.invoke(cli_main, [str(a) for a in args])
        assert result.exit_code == 0, result.output
    key = shared / "strat" / "sample_stratified_key.tsv"
    rows = ["item_id\tannotator_id\tlabel"]
    for line in key.read_text(encoding="utf-8").splitlines():
        if line.startswith("#") or line.startswith("item_id") or not line:
            continue
        item_id = line.split("\t")[0]
        rows.append(f"{item_id}\tr1\tyes")
        rows.append(f"{item_id}\tr2\t{'yes' if int(item_id[1:]) % 3 else 'no'}")
    (shared / "labels.tsv").write_text("\n".join(rows) + "\n", encoding="utf-8")

    _run_all_subcommands(tmp_path / "run1", bios, lexicon, shared)
    _run_all_subcommands(tmp_path / "run2", bios, lexicon, shared)

    files1 = sorted(
        p.relative_to(tmp_path / "run1")
        for p in (tmp_path / "run1").rglob("*") if p.is_file()
    )
    files2 = sorted(
        p.relative_to(tmp_path / "run2")
        for p in (tmp_path / "run2").rglob("*") if p.is_file()
    )
    assert files1 == files2 and len(files1) > 20
    for rel in files1:
        b1 = (tmp_path / "run1" / rel).read_bytes()
        b2 = (tmp_path / "run2" / rel).read_bytes()
        assert b1 == b2, f"{rel} differs between runs"


# -- 7: sampling design fidelity --------------------------------------------------------


@criterion(7, "stratified 840-item design and weighted sampling at 1%")
def test_criterion_7_sampling():
    bucket_counts = {"1": 1, "2": 2, "3-5": 4, "5-10": 7, "10-25": 15,
                     "25-100": 60, "100+": 150}
    index = IdentifierIndex()
    uid = 0
    for tokens in (1, 2, 3, 4):
        for bucket, count in bucket_counts.items():
            for i in range(35):  # every cell holds 35 >= 30 candidates
                phrase = " ".join(["tok"] * tokens) + f" {bucket} {i}"
                for _ in range(count):
                    index.add(
                        UserRecord(f"u{uid}", phrase),
                        [PhraseRecord(text=phrase, token_count=tokens)],
                    )
                    uid += 1
    items = stratified_sample(index, per_cell=30, seed=5)
    assert len(items) == 840
    assert len({item.item_id for item in items}) == 840
    assert len({item.phrase for item in items}) == 840
    cells = {}
    for item in items:
        cells[(item.token_bucket, item.bio_count_bucket)] = cells.get(
            (item.token_bucket, item.bio_count_bucket), 0
        ) + 1
    assert set(cells.values()) == {30} and len(cells) == 28

    weighted = make_index({"aaa": 100, "bbb": 1})
    hits = sum(
        probabilistic_sample(weighted, 1, seed=seed)[0].phrase == "aaa"
        for seed in range(10_000)
    )
    assert hits / 10_000 == pytest.approx(100 / 101, abs=0.01)


# -- 8: pipeline scale check ---------------------------------------------------------------


@criterion(8, "extract + index 1M bios under 5 minutes and 4 GB")
def test_criterion_8_scale(tmp_path):
    bios = tmp_path / "big.jsonl"
    with bios.open("w", encoding="utf-8") as out:
        for record in generate_records(1_000_000, seed=8):
            out.write(json.dumps(record, separators=(",", ":")) + "\n")

    rules = default_rules()
    start = time.perf_counter()
    stream, report = load_corpus(bios)
    index = IdentifierIndex()
    for record in stream:
        index.add(
            record,
            extract_identifiers(record.bio, rules, source_user=record.user_id),
        )
    elapsed = time.perf_counter() - start

    peak_kb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    assert report.n_input == 1_000_000
    assert report.n_retained > 900_000
    assert len(index) > 1000
    assert elapsed < 300.0, f"extract+index took {elapsed:.1f}s"
    assert peak_kb < 4 * 1024 * 1024, f"peak RSS {peak_kb / 1024:.0f} MB"
    print(f"  [scale: {elapsed:.1f}s, peak RSS {peak_kb / 1024 / 1024:.2f} GB]")


# -- 9: lexicon suite -----------------------------------------------------------------------


@criterion(9, "lexicon overlap and meaning comparisons")
def test_criterion_9_lexicon():
    index = make_index({"a": 5, "b": 50, "c": 500})
    curve = overlap_curve(index, Lexicon("toy", [], {"c": ()}),
                          thresholds=[0, 10, 100], min_remaining=0)
    assert curve.fractions == [pytest.approx(1 / 3), pytest.approx(1 / 2), 1.0]
    assert curve.n_remaining == [3, 2, 1]

    single = overlap_curve(
        make_index({f"p{i}": 2 for i in range(40)}),
        Lexicon("toy", [], {"p0": ()}), thresholds=[0, 1, 2], min_remaining=100,
    )
    assert len(single.thresholds) == 1

    present_index = make_index({"x": 2})
    lex = Lexicon("m", ["v"], {"x": (0.0,), "y": (1.0,)})
    (comp,) = meaning_comparison(present_index, lex, n_resamples=200, seed=0)
    assert comp.present_mean == 0.0 and comp.absent_mean == 1.0

    # scaling invariance under random positive affine transforms
    rng = np.random.default_rng(77)
    terms = [f"t{i}" for i in range(24)]
    raw = rng.normal(size=24)
    idx = make_index({t: 2 for i, t in enumerate(terms) if i % 2 == 0})

    def run(scale, shift):
        lexicon = Lexicon(
            "m", ["v"],
            {t: (float(raw[i] * scale + shift),) for i, t in enumerate(terms)},
        )
        return meaning_comparison(idx, lexicon, n_resamples=200, seed=3)[0]

    base = run(1.0, 0.0)
    for _ in range(10):
        scale = float(rng.uniform(0.05, 20.0))
        shift = float(rng.uniform(-100.0, 100.0))
        other = run(scale, shift)
        assert other.present_mean == pytest.approx(base.present_mean, abs=1e-9)
        assert other.absent_mean == pytest.approx(base.absent_mean, abs=1e-9)
        assert other.present_lower == pytest.approx(base.present_lower, abs=1e-9)
        assert other.absent_upper == pytest.approx(base.absent_upper, abs=1e-9)
