"""Scalar statistics: log-odds contrasts, binomial intervals, reliability.

Natural logarithms throughout. The normalized log-odds is the two-outcome
Dirichlet-prior log-odds-ratio z-score: with pseudo-count ``prior`` per
cell,

    delta = ln((a + prior) / (n_a + prior - a)) - ln((b + prior) / (n_b + prior - b))
    var   = 1/(a + prior) + 1/(b + prior)
    zeta  = delta / sqrt(var)

Krippendorff's alpha uses the nominal coincidence-matrix formulation and
supports missing labels and any number of annotators.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Mapping, Sequence

import numpy as np

if TYPE_CHECKING:  # pragma: no cover
    from .indexing import IdentifierIndex

__all__ = [
    "CategoryContrast",
    "BinomialEstimate",
    "ReliabilityTable",
    "raw_log_odds",
    "normalized_log_odds",
    "rank_by_category",
    "continuous_mean_ranking",
    "friend_follower_ratio",
    "agresti_coull_interval",
    "krippendorff_alpha",
    "bootstrap_mean_ci",
    "count_correlation",
    "normal_quantile",
    "CATEGORY_SIDES",
]

DEFAULT_PRIOR = 0.01
DEFAULT_MIN_BIOS = 10


# ---------------------------------------------------------------------------
# Inverse standard-normal CDF, Wichura's AS 241 (PPND16) rational
# approximation; absolute error below 1e-15 over (0, 1).
# ---------------------------------------------------------------------------

_A = (
    3.3871328727963666080e0, 1.3314166789178437745e2, 1.9715909503065514427e3,
    1.3731693765509461125e4, 4.5921953931549871457e4, 6.7265770927008700853e4,
    3.3430575583588128105e4, 2.5090809287301226727e3,
)
_B = (
    1.0, 4.2313330701600911252e1, 6.8718700749205790830e2,
    5.3941960214247511077e3, 2.1213794301586595867e4, 3.9307895800092710610e4,
    2.8729085735721942674e4, 5.2264952788528545610e3,
)
_C = (
    1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
    3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4,
)
_D = (
    1.0, 2.05319162663775882187e0, 1.67638483018380384940e0,
    6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
    5.47593808499534494600e-4, 1.05075007164441684324e-9,
)
_E = (
    6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
    2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7,
)
_F = (
    1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1,
    1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
    1.42151175831644588870e-7, 2.04426310338993978564e-15,
)


def _poly(coeffs: Sequence[float], x: float) -> float:
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def normal_quantile(p: float) -> float:
    """Standard-normal quantile for p in (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile argument must be in (0, 1), got {p}")
    q = p - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        return q * _poly(_A, r) / _poly(_B, r)
    r = p if q < 0 else 1.0 - p
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r -= 1.6
        value = _poly(_C, r) / _poly(_D, r)
    else:
        r -= 5.0
        value = _poly(_E, r) / _poly(_F, r)
    return -value if q < 0 else value


# ---------------------------------------------------------------------------
# Log-odds
# ---------------------------------------------------------------------------


def raw_log_odds(a: float, b: float) -> float:
    """ln((a + 1) / (b + 1)); the +1 smoothing keeps it finite."""
    if a < 0 or b < 0:
        raise ValueError("counts must be non-negative")
    return math.log((a + 1.0) / (b + 1.0))


def normalized_log_odds(
    a: float, b: float, n_a: float, n_b: float, prior: float = DEFAULT_PRIOR
) -> float:
    """Dirichlet-prior log-odds-ratio z-score (two-outcome reduction)."""
    if prior <= 0:
        raise ValueError("prior pseudo-count must be positive")
    if a < 0 or b < 0:
        raise ValueError("counts must be non-negative")
    if a > n_a or b > n_b:
        raise ValueError("per-category count exceeds category total")
    delta = math.log((a + prior) / (n_a + 2 * prior - a - prior)) - math.log(
        (b + prior) / (n_b + 2 * prior - b - prior)
    )
    var = 1.0 / (a + prior) + 1.0 / (b + prior)
    return delta / math.sqrt(var)


def friend_follower_ratio(friends: float, followers: float) -> float:
    """ln((friends + 1) / (followers + 1)), the usual status measure."""
    if friends < 0 or followers < 0:
        raise ValueError("counts must be non-negative")
    return math.log((friends + 1.0) / (followers + 1.0))


# ---------------------------------------------------------------------------
# Binomial interval
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BinomialEstimate:
    successes: int
    trials: int
    confidence: float
    point: float
    lower: float
    upper: float


def agresti_coull_interval(
    successes: int, trials: int, confidence: float = 0.95
) -> BinomialEstimate:
    """Adjusted-proportion binomial interval, clipped to [0, 1]."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must be in (0, 1)")
    z = normal_quantile((1.0 + confidence) / 2.0)
    n_adj = trials + z * z
    p_adj = (successes + z * z / 2.0) / n_adj
    half = z * math.sqrt(p_adj * (1.0 - p_adj) / n_adj)
    return BinomialEstimate(
        successes=successes,
        trials=trials,
        confidence=confidence,
        point=p_adj,
        lower=max(0.0, p_adj - half),
        upper=min(1.0, p_adj + half),
    )


# ---------------------------------------------------------------------------
# Krippendorff's alpha (nominal)
# ---------------------------------------------------------------------------


@dataclass
class ReliabilityTable:
    """Items with per-annotator nominal labels; absent annotators = missing."""

    items: list[tuple[str, dict[str, str]]]
    categories: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        self.categories = frozenset(self.categories)
        if not self.categories:
            seen = {lab for _, labels in self.items for lab in labels.values()}
            self.categories = frozenset(seen)
        for item_id, labels in self.items:
            for lab in labels.values():
                if lab not in self.categories:
                    raise ValueError(f"item {item_id!r}: label {lab!r} not in categories")


def krippendorff_alpha(table: ReliabilityTable) -> float:
    """Nominal alpha = 1 - D_o / D_e over the coincidence matrix.

    Items with fewer than two labels contribute nothing. Raises if no
    pairable values exist; returns 1.0 when expected disagreement is zero
    (a single category in use).
    """
    coincidence: Counter[tuple[str, str]] = Counter()
    n_pairable = 0
    for _, labels in table.items:
        values = list(labels.values())
        m = len(values)
        if m < 2:
            continue
        n_pairable += m
        weight = 1.0 / (m - 1)
        for i, ci in enumerate(values):
            for j, cj in enumerate(values):
                if i != j:
                    coincidence[(ci, cj)] += weight

    if n_pairable < 2:
        raise ValueError("no pairable values: need two labels on some item")

    marginals: Counter[str] = Counter()
    for (ci, _), weight in coincidence.items():
        marginals[ci] += weight

    observed = sum(w for (ci, cj), w in coincidence.items() if ci != cj) / n_pairable
    expected = sum(
        marginals[ci] * marginals[cj]
        for ci in marginals
        for cj in marginals
        if ci != cj
    ) / (n_pairable * (n_pairable - 1))

    if expected == 0.0:
        return 1.0
    return 1.0 - observed / expected


# ---------------------------------------------------------------------------
# Bootstrap
# ---------------------------------------------------------------------------


def bootstrap_mean_ci(
    values: Sequence[float],
    n_resamples: int = 1000,
    confidence: float = 0.95,
    seed: int | np.random.SeedSequence | np.random.Generator = 0,
) -> tuple[float, float, float]:
    """Percentile bootstrap of the mean; deterministic under a fixed seed."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("cannot bootstrap an empty sample")
    if n_resamples < 1:
        raise ValueError("n_resamples must be positive")
    rng = np.random.default_rng(seed)
    means = np.empty(n_resamples)
    chunk = max(1, min(n_resamples, 10_000_000 // max(1, arr.size)))
    done = 0
    while done < n_resamples:
        take = min(chunk, n_resamples - done)
        idx = rng.integers(0, arr.size, size=(take, arr.size))
        means[done : done + take] = arr[idx].mean(axis=1)
        done += take
    alpha = (1.0 - confidence) / 2.0
    lower, upper = np.quantile(means, [alpha, 1.0 - alpha])
    return float(arr.mean()), float(lower), float(upper)


# ---------------------------------------------------------------------------
# Index-level rankings
# ---------------------------------------------------------------------------

# Maps (attribute, requested side) to the (A, B) category values that the
# contrast compares. Race contrasts each non-white value against white.
CATEGORY_SIDES: dict[str, dict[str, tuple[str, str]]] = {
    "sex": {"male": ("male", "female"), "female": ("female", "male")},
    "party": {
        "democrat": ("democrat", "republican"),
        "republican": ("republican", "democrat"),
    },
    "verified": {
        "verified": ("verified", "unverified"),
        "unverified": ("unverified", "verified"),
    },
    "race": {v: (v, "white") for v in ("black", "hispanic", "asian", "other")},
}


@dataclass(frozen=True)
class CategoryContrast:
    phrase: str
    count_a: int
    count_b: int
    n_a: int
    n_b: int
    raw_log_odds: float
    normalized_log_odds: float
    bio_count: int = 0


def rank_by_category(
    index: "IdentifierIndex",
    attribute: str,
    side: str,
    top_k: int = 10,
    min_bios: int = DEFAULT_MIN_BIOS,
    prior: float = DEFAULT_PRIOR,
) -> list[CategoryContrast]:
    """Phrases most aligned with one side of a categorical attribute.

    Ranks by normalized log-odds (descending) with ties broken by
    bio_count then phrase; the raw log-odds rides along for display.
    Phrases below ``min_bios`` unique bios are excluded.
    """
    if attribute not in CATEGORY_SIDES:
        raise ValueError(f"unknown categorical attribute: {attribute!r}")
    sides = CATEGORY_SIDES[attribute]
    if side not in sides:
        raise ValueError(
            f"unknown side {side!r} for {attribute!r}; expected one of {sorted(sides)}"
        )
    value_a, value_b = sides[side]
    totals = index.category_totals.get(attribute, Counter())
    n_a = totals.get(value_a, 0)
    n_b = totals.get(value_b, 0)

    rows = []
    for phrase, stats in index.phrases.items():
        if stats.bio_count < min_bios:
            continue
        counts = stats.category_counts.get(attribute, {})
        a = counts.get(value_a, 0)
        b = counts.get(value_b, 0)
        rows.append(
            CategoryContrast(
                phrase=phrase,
                count_a=a,
                count_b=b,
                n_a=n_a,
                n_b=n_b,
                raw_log_odds=raw_log_odds(a, b),
                normalized_log_odds=normalized_log_odds(a, b, n_a, n_b, prior),
                bio_count=stats.bio_count,
            )
        )
    rows.sort(key=lambda r: (-r.normalized_log_odds, -r.bio_count, r.phrase))
    return rows[:top_k]


def continuous_mean_ranking(
    index: "IdentifierIndex",
    attribute: str,
    side: str,
    top_k: int = 10,
    min_bios: int = DEFAULT_MIN_BIOS,
) -> list[tuple[str, float]]:
    """Phrases with the highest ("high") or lowest ("low") attribute mean.

    The mean is over users expressing the phrase with a non-missing value;
    ties break lexicographically by phrase.
    """
    if side not in ("high", "low"):
        raise ValueError("side must be 'high' or 'low'")
    rows = []
    for phrase, stats in index.phrases.items():
        if stats.bio_count < min_bios:
            continue
        total, count = stats.continuous_sums.get(attribute, (0.0, 0))
        if count == 0:
            continue
        rows.append((phrase, total / count))
    if side == "high":
        rows.sort(key=lambda r: (-r[1], r[0]))
    else:
        rows.sort(key=lambda r: (r[1], r[0]))
    return rows[:top_k]


def _bio_counts(index: "IdentifierIndex | Mapping[str, int]") -> dict[str, int]:
    if isinstance(index, Mapping):
        return dict(index)
    return {phrase: stats.bio_count for phrase, stats in index.phrases.items()}


def count_correlation(
    index_a: "IdentifierIndex | Mapping[str, int]",
    index_b: "IdentifierIndex | Mapping[str, int]",
) -> float:
    """Pearson correlation of bio counts over the union of phrases.

    A phrase absent from one index counts as 0 there. Raises when either
    side has zero variance or an index is empty.
    """
    counts_a = _bio_counts(index_a)
    counts_b = _bio_counts(index_b)
    if not counts_a or not counts_b:
        raise ValueError("cannot correlate an empty index")
    union = sorted(set(counts_a) | set(counts_b))
    xs = np.array([counts_a.get(p, 0) for p in union], dtype=float)
    ys = np.array([counts_b.get(p, 0) for p in union], dtype=float)
    if xs.std() == 0.0 or ys.std() == 0.0:
        raise ValueError("zero variance in bio counts; correlation undefined")
    return float(np.corrcoef(xs, ys)[0, 1])
