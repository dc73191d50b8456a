"""Turn one profile bio into an ordered list of candidate identifier phrases.

The pipeline has four steps: split the bio on explicit delimiters, clean
each raw segment, filter out segments that are too short or too long, and
return the survivors in order. Splitting and cleaning are driven entirely
by a :class:`~bioident.rules.RuleSet`; the filter thresholds (at least 3
alphanumeric characters, at most 3 whitespace tokens) are fixed defaults
with escape hatches for the annotation workflow.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

from .rules import EMOJI_PATTERN, KEEP_PUNCT, RuleSet, default_rules

__all__ = [
    "PhraseRecord",
    "split_bio",
    "clean_phrase",
    "filter_phrases",
    "extract_identifiers",
]

_EMOJI_RE = re.compile(EMOJI_PATTERN)
_WS_RE = re.compile(r"\s+")

# Cleaning passes repeat until the phrase stops changing; the cap only
# matters for pathological replacement rules that never settle.
_MAX_CLEAN_PASSES = 8

DEFAULT_MAX_TOKENS = 3
DEFAULT_MIN_LETTERS = 3


@dataclass(frozen=True)
class PhraseRecord:
    """One cleaned, retained phrase from a bio."""

    text: str
    token_count: int
    source_user: str = ""
    position: int = 0


def split_bio(bio: str, rules: RuleSet) -> list[str]:
    """Split a bio into raw segments on the configured delimiters.

    Segments keep their surrounding whitespace (cleaning trims later);
    only zero-length segments are dropped. Joining the returned segments
    with single delimiters reproduces every non-delimiter character of the
    bio in order.
    """
    if not bio:
        return []
    return [seg for seg in rules.split_pattern.split(bio) if seg != ""]


_CHAR_KEEP_CACHE: dict[str, bool] = {}


def _keep_char(ch: str) -> bool:
    kept = _CHAR_KEEP_CACHE.get(ch)
    if kept is None:
        cat = unicodedata.category(ch)
        kept = not (cat[0] in "PS" and ch not in KEEP_PUNCT
                    and not _EMOJI_RE.match(ch))
        _CHAR_KEEP_CACHE[ch] = kept
    return kept


def _strip_token_punct(token: str) -> str:
    if token.isalnum():
        return token
    if token.startswith("@"):
        # Mentions pass through untouched so handles survive intact.
        return token
    token = "".join(ch for ch in token if _keep_char(ch))
    token = token.lstrip("#")
    return token.strip("/-")


def _clean_once(text: str, rules: RuleSet) -> str:
    s = unicodedata.normalize("NFKC", text).lower()
    s = unicodedata.normalize("NFKC", s)

    for pattern, sub in rules.compiled_replacements:
        s = pattern.sub(sub, s)

    # Boundary removals and edge stopwords can expose each other, so run
    # the pair to a joint fixpoint.
    changed = True
    while changed:
        changed = False
        s = s.strip()
        for phrase in rules.removals_by_length:
            if s == phrase:
                s = ""
                changed = True
            if s.startswith(phrase + " "):
                s = s[len(phrase) + 1 :].lstrip()
                changed = True
            if s.endswith(" " + phrase):
                s = s[: len(s) - len(phrase) - 1].rstrip()
                changed = True
        tokens = s.split()
        trimmed = False
        while tokens and tokens[0] in rules.stopword_set:
            tokens.pop(0)
            trimmed = True
        while tokens and tokens[-1] in rules.stopword_set:
            tokens.pop()
            trimmed = True
        if trimmed:
            s = " ".join(tokens)
            changed = True

    if rules.strip_punctuation:
        s = " ".join(_strip_token_punct(tok) for tok in s.split())

    # Normalization can resurrect delimiter characters (e.g. a fullwidth
    # comma compatibility-mapping to ","); scrub them so no output phrase
    # ever contains a configured delimiter.
    for d in rules.delimiters:
        if d in s:
            s = s.replace(d, " ")
    if rules.strip_emoji:
        s = _EMOJI_RE.sub(" ", s)

    return _WS_RE.sub(" ", s).strip()


def clean_phrase(raw: str, rules: RuleSet) -> str:
    """Normalize one raw segment; may return the empty string.

    Order of operations: NFKC + lowercase, replacements, boundary
    removals and edge stopwords (to a fixpoint), punctuation stripping,
    delimiter/emoji scrub, whitespace collapse. The whole pass repeats
    until the result is stable, which makes cleaning idempotent.
    """
    s = _clean_once(raw, rules)
    for _ in range(_MAX_CLEAN_PASSES):
        nxt = _clean_once(s, rules)
        if nxt == s:
            break
        s = nxt
    return s


def _letter_count(phrase: str) -> int:
    return sum(ch.isalnum() for ch in phrase)


def filter_phrases(
    phrases: list[str],
    source_user: str = "",
    max_tokens: int | None = DEFAULT_MAX_TOKENS,
    min_letters: int = DEFAULT_MIN_LETTERS,
) -> list[PhraseRecord]:
    """Drop empty, too-short and too-long phrases; assign output positions.

    ``max_tokens=None`` disables the token-length cut (used when sampling
    4+ token phrases for annotation); the letter cut always applies.
    """
    records = []
    for phrase in phrases:
        if not phrase:
            continue
        if _letter_count(phrase) < min_letters:
            continue
        token_count = len(phrase.split())
        if max_tokens is not None and token_count > max_tokens:
            continue
        records.append(
            PhraseRecord(
                text=phrase,
                token_count=token_count,
                source_user=source_user,
                position=len(records),
            )
        )
    return records


def extract_identifiers(
    bio: str,
    rules: RuleSet | None = None,
    source_user: str = "",
    max_tokens: int | None = DEFAULT_MAX_TOKENS,
) -> list[PhraseRecord]:
    """Split, clean and filter a bio into identifier-phrase records."""
    if rules is None:
        rules = default_rules()
    cleaned = [clean_phrase(seg, rules) for seg in split_bio(bio, rules)]
    return filter_phrases(cleaned, source_user=source_user, max_tokens=max_tokens)
