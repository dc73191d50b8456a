"""Aggregate phrase records into per-identifier statistics and a sparse
identifier-by-user matrix.

A user contributes at most once to any phrase's counts no matter how often
the phrase repeats in their bio, so matrix entries are binary. Demographic
tallies only include users whose value for that attribute is present.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

from .corpus import CATEGORICAL_ATTRS, CONTINUOUS_ATTRS, UserRecord
from .extractor import PhraseRecord
from .stats import friend_follower_ratio

__all__ = [
    "IdentifierStats",
    "IdentifierIndex",
    "BipartiteMatrix",
    "EmptyMatrixError",
    "build_index",
    "build_matrix",
]

class EmptyMatrixError(ValueError):
    """Raised when threshold pruning removes every row or column."""


@dataclass
class IdentifierStats:
    phrase: str
    token_count: int
    bio_count: int = 0
    category_counts: dict[str, Counter] = field(default_factory=dict)
    continuous_sums: dict[str, tuple[float, int]] = field(default_factory=dict)
    users: set[str] = field(default_factory=set)

    def _tally(self, attributes: Mapping[str, object]) -> None:
        for attr in CATEGORICAL_ATTRS:
            value = attributes.get(attr)
            if value is None:
                continue
            self.category_counts.setdefault(attr, Counter())[value] += 1
        for attr in CONTINUOUS_ATTRS:
            value = attributes.get(attr)
            if value is None:
                continue
            total, count = self.continuous_sums.get(attr, (0.0, 0))
            self.continuous_sums[attr] = (total + float(value), count + 1)


def _record_attributes(record: UserRecord) -> dict[str, object]:
    attrs: dict[str, object] = {
        "sex": record.sex,
        "party": record.party,
        "race": record.race,
        "verified": None,
        "age": record.age,
        "pct_rural": record.pct_rural,
        "status_ratio": None,
    }
    if record.verified is not None:
        attrs["verified"] = "verified" if record.verified else "unverified"
    if record.friends is not None and record.followers is not None:
        attrs["status_ratio"] = friend_follower_ratio(record.friends, record.followers)
    return attrs


class IdentifierIndex:
    """Phrase -> occurrence statistics plus per-category corpus totals.

    ``category_totals[attr][value]`` is the number of (phrase, user) pairs
    whose user carries that attribute value, i.e. the corpus token total
    used as the denominator in normalized log-odds.
    """

    def __init__(self) -> None:
        self.phrases: dict[str, IdentifierStats] = {}
        self.category_totals: dict[str, Counter] = {}
        self.n_users: int = 0

    def __len__(self) -> int:
        return len(self.phrases)

    def add(self, record: UserRecord, phrases: Iterable[PhraseRecord]) -> None:
        """Tally one user's phrases; duplicate phrases within the bio collapse."""
        attrs = _record_attributes(record)
        seen_any = False
        for rec in phrases:
            stats = self.phrases.get(rec.text)
            if stats is None:
                stats = IdentifierStats(phrase=rec.text, token_count=rec.token_count)
                self.phrases[rec.text] = stats
            if record.user_id in stats.users:
                continue
            stats.users.add(record.user_id)
            stats.bio_count += 1
            stats._tally(attrs)
            seen_any = True
            for attr in CATEGORICAL_ATTRS:
                value = attrs.get(attr)
                if value is not None:
                    self.category_totals.setdefault(attr, Counter())[value] += 1
        if seen_any:
            self.n_users += 1

    def merge(self, other: "IdentifierIndex") -> "IdentifierIndex":
        """Associative merge of two shard indexes built from disjoint users."""
        merged = IdentifierIndex()
        for source in (self, other):
            for phrase, stats in source.phrases.items():
                if not stats.users and stats.bio_count:
                    raise ValueError(
                        "cannot merge an index without user sets (loaded from a dump?)"
                    )
                tgt = merged.phrases.get(phrase)
                if tgt is None:
                    tgt = IdentifierStats(phrase=phrase, token_count=stats.token_count)
                    merged.phrases[phrase] = tgt
                new_users = stats.users - tgt.users
                tgt.users |= new_users
                tgt.bio_count = len(tgt.users)
                if len(new_users) != len(stats.users):
                    raise ValueError("merge requires shards with disjoint users per phrase")
                for attr, counter in stats.category_counts.items():
                    tgt.category_counts.setdefault(attr, Counter()).update(counter)
                for attr, (total, count) in stats.continuous_sums.items():
                    cur_total, cur_count = tgt.continuous_sums.get(attr, (0.0, 0))
                    tgt.continuous_sums[attr] = (cur_total + total, cur_count + count)
            for attr, counter in source.category_totals.items():
                merged.category_totals.setdefault(attr, Counter()).update(counter)
        merged.n_users = self.n_users + other.n_users
        return merged

    # -- tabular dump / load -------------------------------------------------

    def dump_rows(self) -> tuple[list[str], list[list[str]]]:
        """Header and rows for the index dump (phrase stats, no user sets)."""
        cat_cols: list[tuple[str, str]] = []
        for attr in CATEGORICAL_ATTRS:
            values = sorted(
                {v for s in self.phrases.values() for v in s.category_counts.get(attr, ())}
            )
            cat_cols.extend((attr, v) for v in values)
        cont_cols = [
            attr
            for attr in CONTINUOUS_ATTRS
            if any(attr in s.continuous_sums for s in self.phrases.values())
        ]
        header = ["phrase", "token_count", "bio_count"]
        header += [f"cat__{attr}__{value}" for attr, value in cat_cols]
        for attr in cont_cols:
            header += [f"cont__{attr}__sum", f"cont__{attr}__n"]

        rows = []
        for phrase in sorted(self.phrases, key=lambda p: (-self.phrases[p].bio_count, p)):
            stats = self.phrases[phrase]
            row = [phrase, str(stats.token_count), str(stats.bio_count)]
            for attr, value in cat_cols:
                row.append(str(stats.category_counts.get(attr, {}).get(value, 0)))
            for attr in cont_cols:
                total, count = stats.continuous_sums.get(attr, (0.0, 0))
                row.append(repr(total))
                row.append(str(count))
            rows.append(row)
        return header, rows

    @classmethod
    def from_rows(cls, header: list[str], rows: Iterable[list[str]]) -> "IdentifierIndex":
        index = cls()
        cat_cols: list[tuple[int, str, str]] = []
        cont_cols: list[tuple[int, str]] = []
        for pos, name in enumerate(header):
            if name.startswith("cat__"):
                _, attr, value = name.split("__", 2)
                cat_cols.append((pos, attr, value))
            elif name.startswith("cont__") and name.endswith("__sum"):
                _, attr, _ = name.split("__", 2)
                cont_cols.append((pos, attr))
        for row in rows:
            stats = IdentifierStats(
                phrase=row[0], token_count=int(row[1]), bio_count=int(row[2])
            )
            for pos, attr, value in cat_cols:
                count = int(row[pos])
                if count:
                    stats.category_counts.setdefault(attr, Counter())[value] = count
                    index.category_totals.setdefault(attr, Counter())[value] += count
            for pos, attr in cont_cols:
                total = float(row[pos])
                count = int(row[pos + 1])
                if count:
                    stats.continuous_sums[attr] = (total, count)
            index.phrases[stats.phrase] = stats
        return index


def build_index(
    records: Iterable[tuple[UserRecord, Iterable[PhraseRecord]]],
) -> IdentifierIndex:
    """Fold (user, phrases) pairs into an IdentifierIndex."""
    index = IdentifierIndex()
    for record, phrases in records:
        index.add(record, phrases)
    return index


@dataclass
class BipartiteMatrix:
    """Binary identifier-by-user matrix with row/column labels."""

    rows: list[str]
    cols: list[str]
    matrix: sp.csr_matrix

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def build_matrix(
    index: IdentifierIndex,
    min_bio_count: int = 100,
    min_user_identifiers: int = 1,
) -> BipartiteMatrix:
    """Prune to identifiers in > min_bio_count bios and users with
    > min_user_identifiers retained identifiers, iterated to a fixpoint.

    Raises :class:`EmptyMatrixError` if nothing survives.
    """
    if min_bio_count < 0 or min_user_identifiers < 0:
        raise ValueError("thresholds must be non-negative")

    phrase_users: dict[str, set[str]] = {}
    for phrase, stats in index.phrases.items():
        if stats.bio_count > min_bio_count:
            if not stats.users:
                raise ValueError("matrix construction needs an index with user sets")
            phrase_users[phrase] = set(stats.users)

    user_degree: Counter[str] = Counter()
    for users in phrase_users.values():
        user_degree.update(users)
    kept_users = {u for u, deg in user_degree.items() if deg > min_user_identifiers}

    while True:
        changed = False
        for phrase in list(phrase_users):
            kept = phrase_users[phrase] & kept_users
            if len(kept) <= min_bio_count:
                del phrase_users[phrase]
                changed = True
            else:
                phrase_users[phrase] = kept
        user_degree = Counter()
        for users in phrase_users.values():
            user_degree.update(users)
        new_kept = {u for u, deg in user_degree.items() if deg > min_user_identifiers}
        if new_kept != kept_users:
            changed = True
        kept_users = new_kept
        if not changed:
            break

    if not phrase_users or not kept_users:
        raise EmptyMatrixError(
            "no identifiers/users survive thresholds "
            f"(min_bio_count={min_bio_count}, min_user_identifiers={min_user_identifiers})"
        )

    rows = sorted(phrase_users)
    cols = sorted(kept_users)
    col_pos = {u: i for i, u in enumerate(cols)}
    indptr = [0]
    indices: list[int] = []
    for phrase in rows:
        hits = sorted(col_pos[u] for u in phrase_users[phrase])
        indices.extend(hits)
        indptr.append(len(indices))
    matrix = sp.csr_matrix(
        (np.ones(len(indices), dtype=np.float64), indices, indptr),
        shape=(len(rows), len(cols)),
    )
    return BipartiteMatrix(rows=rows, cols=cols, matrix=matrix)
