"""Compare extracted identifiers against pre-existing term lists.

Lexica are CSV files with a header: the first column is the term, the
remaining columns are named meaning dimensions (possibly none). Terms are
normalized with the extractor's cleaning pass so membership tests use
exact normalized-phrase equality.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .extractor import clean_phrase
from .rules import RuleSet, default_rules
from .stats import bootstrap_mean_ci

if TYPE_CHECKING:  # pragma: no cover
    from .indexing import IdentifierIndex

__all__ = [
    "Lexicon",
    "OverlapCurve",
    "DimensionComparison",
    "load_lexicon",
    "overlap_curve",
    "meaning_comparison",
]

log = logging.getLogger(__name__)

DEFAULT_MIN_REMAINING = 100


@dataclass
class Lexicon:
    name: str
    dimensions: list[str]
    entries: dict[str, tuple[float | None, ...]]

    def __len__(self) -> int:
        return len(self.entries)


def load_lexicon(
    path: str | Path, name: str | None = None, rules: RuleSet | None = None
) -> Lexicon:
    """Read a term list with optional meaning dimensions from CSV.

    The header is mandatory; numeric-looking header cells mean the file
    has none and raise. Duplicate terms after normalization keep the first
    occurrence with a warning. Empty dimension cells are missing values.
    """
    path = Path(path)
    rules = rules or default_rules()
    with path.open("r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty lexicon file")
        if len(header) > 1:
            for cell in header[1:]:
                try:
                    float(cell)
                except ValueError:
                    continue
                raise ValueError(f"{path}: missing header row (found numeric {cell!r})")
        dimensions = [cell.strip() for cell in header[1:]]

        entries: dict[str, tuple[float | None, ...]] = {}
        for row_no, row in enumerate(reader, start=2):
            if not row or not any(cell.strip() for cell in row):
                continue
            term = clean_phrase(row[0], rules)
            if not term:
                log.warning("%s:%d: term %r normalizes to nothing, skipped", path, row_no, row[0])
                continue
            values: list[float | None] = []
            for pos, dim in enumerate(dimensions, start=1):
                cell = row[pos].strip() if pos < len(row) else ""
                if cell == "":
                    values.append(None)
                else:
                    try:
                        values.append(float(cell))
                    except ValueError:
                        raise ValueError(
                            f"{path}:{row_no}: non-numeric value {cell!r} for {dim!r}"
                        )
            if term in entries:
                log.warning("%s:%d: duplicate term %r, keeping first", path, row_no, term)
                continue
            entries[term] = tuple(values)
    return Lexicon(name=name or path.stem, dimensions=dimensions, entries=entries)


@dataclass
class OverlapCurve:
    """Lexicon-membership fraction among identifiers above each cutoff."""

    thresholds: list[int]
    fractions: list[float]
    n_remaining: list[int]


def _default_threshold_grid(max_count: int, points: int = 30) -> list[int]:
    if max_count < 1:
        return [0]
    grid = np.unique(
        np.round(np.geomspace(1, max(1, max_count), num=points)).astype(int)
    )
    return [0] + [int(t) for t in grid]


def overlap_curve(
    index: "IdentifierIndex",
    lexicon: Lexicon,
    thresholds: Sequence[int] | None = None,
    min_remaining: int = DEFAULT_MIN_REMAINING,
) -> OverlapCurve:
    """Fraction of above-cutoff identifiers found in the lexicon.

    The grid defaults to a log-spaced sweep up to the largest observed bio
    count. The first grid point is always emitted; the curve stops once
    ``min_remaining`` or fewer identifiers are left (default 100, matching
    the stability cutoff used for reporting).
    """
    counts = sorted(
        ((stats.bio_count, phrase) for phrase, stats in index.phrases.items()),
        reverse=True,
    )
    if thresholds is None:
        max_count = counts[0][0] if counts else 0
        thresholds = _default_threshold_grid(max_count)
    grid = sorted(set(int(t) for t in thresholds))

    terms = set(lexicon.entries)
    out_thresholds: list[int] = []
    fractions: list[float] = []
    remaining: list[int] = []
    for cutoff in grid:
        survivors = [phrase for count, phrase in counts if count > cutoff]
        n = len(survivors)
        if n == 0:
            break
        hits = sum(1 for phrase in survivors if phrase in terms)
        out_thresholds.append(cutoff)
        fractions.append(hits / n)
        remaining.append(n)
        if n <= min_remaining:
            break
    return OverlapCurve(out_thresholds, fractions, remaining)


@dataclass
class DimensionComparison:
    dimension: str
    n_present: int
    present_mean: float
    present_lower: float
    present_upper: float
    n_absent: int
    absent_mean: float
    absent_lower: float
    absent_upper: float


def meaning_comparison(
    index: "IdentifierIndex",
    lexicon: Lexicon,
    n_resamples: int = 1000,
    seed: int = 0,
    confidence: float = 0.95,
) -> list[DimensionComparison]:
    """Mean scaled meaning per dimension, split by presence in the index.

    Each dimension is min-max scaled to [0, 1] over the whole lexicon, so
    the scale midpoint is 0.5 and the result is invariant under positive
    affine transforms of the raw values. Presence means bio_count >= 1.
    Dimensions where either side is empty are skipped with a warning.
    """
    present_terms = {
        phrase for phrase, stats in index.phrases.items() if stats.bio_count >= 1
    }
    seq = np.random.SeedSequence(seed)
    children = iter(seq.spawn(2 * max(1, len(lexicon.dimensions))))
    results = []
    for dim_pos, dim in enumerate(lexicon.dimensions):
        values = {
            term: vec[dim_pos]
            for term, vec in lexicon.entries.items()
            if vec[dim_pos] is not None
        }
        seed_present = next(children)
        seed_absent = next(children)
        if not values:
            log.warning("dimension %r has no measured terms, skipped", dim)
            continue
        raw = np.array(list(values.values()), dtype=float)
        vmin, vmax = raw.min(), raw.max()
        span = vmax - vmin
        scaled = {
            term: ((val - vmin) / span if span > 0 else 0.5)
            for term, val in values.items()
        }
        present = [scaled[t] for t in sorted(scaled) if t in present_terms]
        absent = [scaled[t] for t in sorted(scaled) if t not in present_terms]
        if not present or not absent:
            log.warning(
                "dimension %r: one presence side is empty (present=%d absent=%d), skipped",
                dim, len(present), len(absent),
            )
            continue
        p_mean, p_lo, p_hi = bootstrap_mean_ci(present, n_resamples, confidence, seed_present)
        a_mean, a_lo, a_hi = bootstrap_mean_ci(absent, n_resamples, confidence, seed_absent)
        results.append(
            DimensionComparison(
                dimension=dim,
                n_present=len(present),
                present_mean=p_mean,
                present_lower=p_lo,
                present_upper=p_hi,
                n_absent=len(absent),
                absent_mean=a_mean,
                absent_lower=a_lo,
                absent_upper=a_hi,
            )
        )
    return results
