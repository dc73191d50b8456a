"""Annotation sample designs and label merging.

Two sample designs: a stratified draw over token-count and bio-count
buckets, and a probability-proportional-to-bio-count draw. Sample files
shown to annotators are blind (item id and phrase only); bucket metadata
is restored at merge time through the item id.

Bucket edges are half-open: bio-count buckets are [1,1], [2,2], [3,5),
[5,10), [10,25), [25,100), [100, inf); token buckets are 1, 2, 3, 4+.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .stats import BinomialEstimate, ReliabilityTable, agresti_coull_interval, krippendorff_alpha

if TYPE_CHECKING:  # pragma: no cover
    from .indexing import IdentifierIndex

__all__ = [
    "AnnotationItem",
    "MergedAnnotations",
    "BucketSummary",
    "TOKEN_BUCKETS",
    "BIO_BUCKETS",
    "token_bucket",
    "bio_count_bucket",
    "stratified_sample",
    "probabilistic_sample",
    "merge_annotations",
    "read_label_file",
]

log = logging.getLogger(__name__)

TOKEN_BUCKETS = ("1", "2", "3", "4+")
BIO_BUCKETS = ("1", "2", "3-5", "5-10", "10-25", "25-100", "100+")

VALID_LABELS = frozenset({"yes", "no", "yes_multi", "unclear"})


def token_bucket(token_count: int) -> str:
    if token_count < 1:
        raise ValueError("token_count must be at least 1")
    return str(token_count) if token_count <= 3 else "4+"


def bio_count_bucket(bio_count: int) -> str:
    if bio_count < 1:
        raise ValueError("bio_count must be at least 1")
    if bio_count == 1:
        return "1"
    if bio_count == 2:
        return "2"
    if bio_count < 5:
        return "3-5"
    if bio_count < 10:
        return "5-10"
    if bio_count < 25:
        return "10-25"
    if bio_count < 100:
        return "25-100"
    return "100+"


@dataclass
class AnnotationItem:
    item_id: str
    phrase: str
    token_bucket: str
    bio_count_bucket: str
    labels: dict[str, str] = field(default_factory=dict)


def stratified_sample(
    index: "IdentifierIndex", per_cell: int, seed: int = 0
) -> list[AnnotationItem]:
    """Uniform draw of up to ``per_cell`` phrases from each of the 28
    token-by-bio-count cells, without replacement.

    Cells smaller than ``per_cell`` contribute everything they have, with
    a warning. The 4+ token cells are only populated when the index was
    built from pre-length-filter extraction output. Deterministic under
    ``seed``.
    """
    if per_cell < 1:
        raise ValueError("per_cell must be at least 1")
    if len(index) == 0:
        raise ValueError("cannot sample from an empty index")

    cells: dict[tuple[str, str], list[str]] = {}
    for phrase, stats in index.phrases.items():
        key = (token_bucket(stats.token_count), bio_count_bucket(stats.bio_count))
        cells.setdefault(key, []).append(phrase)

    rng = np.random.default_rng(seed)
    items: list[AnnotationItem] = []
    for tok in TOKEN_BUCKETS:
        for bio in BIO_BUCKETS:
            pool = sorted(cells.get((tok, bio), ()))
            if not pool:
                continue
            take = min(per_cell, len(pool))
            if take < per_cell:
                log.warning(
                    "cell (%s tokens, %s bios) has only %d phrases (wanted %d)",
                    tok, bio, len(pool), per_cell,
                )
            chosen = rng.choice(len(pool), size=take, replace=False)
            for pos in chosen:
                items.append(
                    AnnotationItem(
                        item_id=f"s{len(items):05d}",
                        phrase=pool[int(pos)],
                        token_bucket=tok,
                        bio_count_bucket=bio,
                    )
                )
    return items


def probabilistic_sample(
    index: "IdentifierIndex", n: int, seed: int = 0
) -> list[AnnotationItem]:
    """Draw ``n`` distinct phrases with probability proportional to
    bio_count, by successive weighted draws without replacement.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    phrases = sorted(index.phrases)
    if n > len(phrases):
        raise ValueError(f"requested {n} phrases but index holds {len(phrases)}")
    weights = np.array(
        [index.phrases[p].bio_count for p in phrases], dtype=float
    )
    rng = np.random.default_rng(seed)
    items: list[AnnotationItem] = []
    for _ in range(n):
        total = weights.sum()
        if total <= 0:
            raise ValueError("all remaining phrases have zero bio_count")
        pick = int(rng.choice(len(phrases), p=weights / total))
        weights[pick] = 0.0
        phrase = phrases[pick]
        stats = index.phrases[phrase]
        items.append(
            AnnotationItem(
                item_id=f"p{len(items):05d}",
                phrase=phrase,
                token_bucket=token_bucket(stats.token_count),
                bio_count_bucket=bio_count_bucket(stats.bio_count),
            )
        )
    return items


def read_label_file(path: str | Path) -> list[tuple[str, str, str]]:
    """Read (item_id, annotator_id, label) rows from a headed TSV/CSV file."""
    path = Path(path)
    rows: list[tuple[str, str, str]] = []
    with path.open("r", encoding="utf-8", newline="") as handle:
        first = handle.readline()
        if not first.strip():
            return rows
        delim = "\t" if "\t" in first else ","
        header = [cell.strip().lower() for cell in first.rstrip("\n").split(delim)]
        expected = ["item_id", "annotator_id", "label"]
        if header[:3] != expected:
            raise ValueError(f"{path}: expected header {expected}, found {header[:3]}")
        for line_no, line in enumerate(handle, start=2):
            if not line.strip():
                continue
            cells = [cell.strip() for cell in line.rstrip("\n").split(delim)]
            if len(cells) < 3:
                raise ValueError(f"{path}:{line_no}: expected 3 columns")
            rows.append((cells[0], cells[1], cells[2].lower()))
    return rows


@dataclass
class BucketSummary:
    token_bucket: str
    bio_count_bucket: str
    n_items: int
    yes: BinomialEstimate
    no: BinomialEstimate
    unclear: BinomialEstimate


@dataclass
class MergedAnnotations:
    table: ReliabilityTable
    alpha_including_unclear: float
    alpha_excluding_unclear: float | None
    n_items_labeled: int
    n_items_excluded: int
    buckets: list[BucketSummary]


def _consensus(labels: dict[str, str]) -> str:
    """Majority label among cast votes; ties and no-majority go to unclear."""
    counts = {"yes": 0, "no": 0, "unclear": 0}
    for lab in labels.values():
        counts[lab] += 1
    total = sum(counts.values())
    for lab in ("yes", "no", "unclear"):
        if counts[lab] * 2 > total:
            return lab
    return "unclear"


def merge_annotations(
    items: Sequence[AnnotationItem],
    label_files: Sequence[str | Path],
    confidence: float = 0.95,
) -> MergedAnnotations:
    """Attach labels to sampled items and compute reliability/proportions.

    ``yes_multi`` collapses to ``yes`` before any computation. Alpha is
    reported both including items any annotator flagged unclear and
    excluding them (over the yes/no remainder); the excluding variant is
    None when too little data remains. Per-bucket rows give the fraction
    of items whose consensus is yes/no/unclear with Agresti-Coull
    intervals, for every populated cell, each token bucket overall, and
    the whole sample.
    """
    by_id = {item.item_id: item for item in items}
    for item in items:
        item.labels = {}
    for path in label_files:
        for item_id, annotator, label in read_label_file(path):
            if item_id not in by_id:
                raise ValueError(f"label for unknown item {item_id!r}")
            if label not in VALID_LABELS:
                raise ValueError(f"invalid label {label!r} for item {item_id!r}")
            if label == "yes_multi":
                label = "yes"
            by_id[item_id].labels[annotator] = label

    labeled = [item for item in items if item.labels]
    table = ReliabilityTable(
        items=[(item.item_id, dict(item.labels)) for item in labeled],
        categories=frozenset({"yes", "no", "unclear"}),
    )
    alpha_incl = krippendorff_alpha(table)

    clear_items = [
        item for item in labeled if "unclear" not in item.labels.values()
    ]
    alpha_excl: float | None
    try:
        alpha_excl = krippendorff_alpha(
            ReliabilityTable(
                items=[(item.item_id, dict(item.labels)) for item in clear_items],
                categories=frozenset({"yes", "no"}),
            )
        )
    except ValueError:
        log.warning("too few clear items to compute the excluding-unclear alpha")
        alpha_excl = None

    def _bucket_rows(group: list[AnnotationItem], tok: str, bio: str) -> BucketSummary:
        consensus = [_consensus(item.labels) for item in group]
        n = len(consensus)
        return BucketSummary(
            token_bucket=tok,
            bio_count_bucket=bio,
            n_items=n,
            yes=agresti_coull_interval(sum(c == "yes" for c in consensus), n, confidence),
            no=agresti_coull_interval(sum(c == "no" for c in consensus), n, confidence),
            unclear=agresti_coull_interval(
                sum(c == "unclear" for c in consensus), n, confidence
            ),
        )

    buckets: list[BucketSummary] = []
    for tok in TOKEN_BUCKETS:
        tok_items = [item for item in labeled if item.token_bucket == tok]
        for bio in BIO_BUCKETS:
            group = [item for item in tok_items if item.bio_count_bucket == bio]
            if group:
                buckets.append(_bucket_rows(group, tok, bio))
        if tok_items:
            buckets.append(_bucket_rows(tok_items, tok, "all"))
    if labeled:
        buckets.append(_bucket_rows(labeled, "all", "all"))

    return MergedAnnotations(
        table=table,
        alpha_including_unclear=alpha_incl,
        alpha_excluding_unclear=alpha_excl,
        n_items_labeled=len(labeled),
        n_items_excluded=len(labeled) - len(clear_items),
        buckets=buckets,
    )
