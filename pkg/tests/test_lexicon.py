"""Lexicon loading, overlap curves and meaning comparisons."""

import numpy as np
import pytest

from bioident.lexicon import Lexicon, load_lexicon, meaning_comparison, overlap_curve
from conftest import make_index


def _write(tmp_path, text, name="lex.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_load_lexicon_basic(tmp_path):
    path = _write(tmp_path, "term,evaluation,power,activity\nDoctor,1.2,0.9,0.1\n")
    lex = load_lexicon(path, "act")
    assert lex.name == "act"
    assert lex.dimensions == ["evaluation", "power", "activity"]
    assert lex.entries["doctor"] == (1.2, 0.9, 0.1)


def test_load_lexicon_duplicate_keeps_first(tmp_path, caplog):
    path = _write(tmp_path, "term,v\nMom,1.0\nmom,2.0\n")
    with caplog.at_level("WARNING"):
        lex = load_lexicon(path)
    assert lex.entries["mom"] == (1.0,)
    assert "duplicate term" in caplog.text


def test_load_lexicon_empty_file_rejected(tmp_path):
    path = _write(tmp_path, "")
    with pytest.raises(ValueError, match="empty lexicon"):
        load_lexicon(path)


def test_load_lexicon_missing_header_rejected(tmp_path):
    path = _write(tmp_path, "doctor,1.2,0.9\nnurse,0.5,0.4\n")
    with pytest.raises(ValueError, match="missing header"):
        load_lexicon(path)


def test_load_lexicon_term_only_and_missing_cells(tmp_path):
    terms_only = load_lexicon(_write(tmp_path, "term\nmom\nwife\n", "a.csv"))
    assert terms_only.dimensions == []
    assert set(terms_only.entries) == {"mom", "wife"}
    gaps = load_lexicon(_write(tmp_path, "term,v\nmom,\nwife,2.0\n", "b.csv"))
    assert gaps.entries["mom"] == (None,)


def test_load_lexicon_normalizes_terms(tmp_path):
    path = _write(tmp_path, "term,v\n  Proud DAD ,1.0\n#MAGA,0.5\n")
    lex = load_lexicon(path)
    assert set(lex.entries) == {"proud dad", "maga"}


# -- overlap ------------------------------------------------------------------


def test_overlap_curve_hand_count():
    # Hand count: survivors by cutoff are {a,b,c}, {b,c}, {c}; with "c" in
    # the lexicon the member fractions are 1/3, 1/2, 1/1.
    index = make_index({"a": 5, "b": 50, "c": 500})
    lex = Lexicon("toy", [], {"c": ()})
    curve = overlap_curve(index, lex, thresholds=[0, 10, 100], min_remaining=0)
    assert curve.thresholds == [0, 10, 100]
    assert curve.n_remaining == [3, 2, 1]
    assert curve.fractions == [pytest.approx(1 / 3), pytest.approx(1 / 2), 1.0]
    # and with only "b" listed, the last point drops to zero
    curve_b = overlap_curve(index, Lexicon("toy", [], {"b": ()}),
                            thresholds=[0, 10, 100], min_remaining=0)
    assert curve_b.fractions == [pytest.approx(1 / 3), pytest.approx(1 / 2), 0.0]


def test_overlap_curve_empty_lexicon():
    index = make_index({"a": 5, "b": 50})
    curve = overlap_curve(index, Lexicon("none", [], {}), thresholds=[0, 10],
                          min_remaining=0)
    assert curve.fractions == [0.0, 0.0]


def test_overlap_curve_truncates_at_min_remaining():
    index = make_index({f"p{i}": 2 for i in range(40)})
    lex = Lexicon("toy", [], {"p0": ()})
    curve = overlap_curve(index, lex, thresholds=[0, 1, 2], min_remaining=100)
    # first cutoff already leaves <= 100 identifiers: single-point curve
    assert curve.thresholds == [0]
    assert curve.n_remaining == [40]


def test_overlap_full_lexicon_is_one_everywhere():
    index = make_index({"a": 3, "b": 30, "c": 300})
    lex = Lexicon("all", [], {"a": (), "b": (), "c": ()})
    curve = overlap_curve(index, lex, thresholds=[0, 5, 50], min_remaining=0)
    assert curve.fractions == [1.0, 1.0, 1.0]
    assert curve.n_remaining == sorted(curve.n_remaining, reverse=True)


def test_overlap_default_grid_log_spaced():
    index = make_index({"a": 1, "b": 1000})
    curve = overlap_curve(index, Lexicon("x", [], {}), min_remaining=0)
    assert curve.thresholds[0] == 0
    assert curve.thresholds == sorted(set(curve.thresholds))


# -- meaning ------------------------------------------------------------------


def test_meaning_comparison_toy_split():
    index = make_index({"x": 2})
    lex = Lexicon("m", ["v"], {"x": (0.0,), "y": (1.0,)})
    (result,) = meaning_comparison(index, lex, n_resamples=100, seed=0)
    assert result.present_mean == 0.0
    assert result.absent_mean == 1.0
    assert result.n_present == 1 and result.n_absent == 1
    assert result.present_lower == result.present_upper == 0.0


def test_meaning_comparison_all_present_skipped(caplog):
    index = make_index({"x": 1, "y": 2})
    lex = Lexicon("m", ["v"], {"x": (0.0,), "y": (1.0,)})
    with caplog.at_level("WARNING"):
        assert meaning_comparison(index, lex, 50, 0) == []
    assert "one presence side is empty" in caplog.text


def test_meaning_scaling_maps_extremes_to_unit_interval():
    index = make_index({"lo": 1, "hi": 1})
    lex = Lexicon("m", ["v"], {"lo": (-7.0,), "hi": (13.0,), "mid": (3.0,)})
    (result,) = meaning_comparison(index, lex, 50, 1)
    assert result.present_mean == pytest.approx(0.5)  # mean of 0 and 1
    assert result.absent_mean == pytest.approx(0.5)  # mid maps to 0.5


def test_meaning_invariant_under_positive_affine(tmp_path):
    rng = np.random.default_rng(5)
    terms = [f"t{i}" for i in range(20)]
    raw = rng.normal(size=20)
    present = {t: int(i % 3 == 0) for i, t in enumerate(terms)}
    index = make_index({t: 3 for t in terms if present[t]})

    def results(scale, shift):
        lex = Lexicon("m", ["v"], {t: (float(raw[i] * scale + shift),)
                                   for i, t in enumerate(terms)})
        return meaning_comparison(index, lex, n_resamples=200, seed=9)

    base = results(1.0, 0.0)
    transformed = results(4.25, -11.0)
    assert base[0].present_mean == pytest.approx(transformed[0].present_mean, abs=1e-12)
    assert base[0].absent_mean == pytest.approx(transformed[0].absent_mean, abs=1e-12)
    assert base[0].present_lower == pytest.approx(transformed[0].present_lower, abs=1e-12)
    assert base[0].absent_upper == pytest.approx(transformed[0].absent_upper, abs=1e-12)


def test_meaning_presence_split_is_partition():
    index = make_index({"a": 1, "b": 2})
    lex = Lexicon("m", ["v"], {"a": (0.1,), "b": (0.4,), "c": (0.9,), "d": (0.5,)})
    (result,) = meaning_comparison(index, lex, 50, 2)
    assert result.n_present + result.n_absent == len(lex.entries)
