"""Ingest line-delimited profile records and apply account-level filters.

Input is UTF-8 JSON lines, one profile per line. Three filters run in a
fixed order, each on the survivors of the previous one: blank bios,
organizational language ("we are" / "not affiliated" as case-insensitive
substrings of the raw bio), and last-status language outside the allowed
set. Unknown or missing languages are kept.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator

__all__ = [
    "UserRecord",
    "FilterReport",
    "DropReason",
    "RecordParseError",
    "parse_user_record",
    "filter_account",
    "load_corpus",
    "DEFAULT_ALLOWED_LANGS",
]

DEFAULT_ALLOWED_LANGS = frozenset({"en", "es"})
ORG_MARKERS = ("we are", "not affiliated")

SEX_VALUES = frozenset({"male", "female"})
PARTY_VALUES = frozenset({"democrat", "republican", "other"})
RACE_VALUES = frozenset({"white", "black", "hispanic", "asian", "other"})

CATEGORICAL_ATTRS = ("sex", "party", "race", "verified")
CONTINUOUS_ATTRS = ("age", "pct_rural", "status_ratio")


class RecordParseError(ValueError):
    """A malformed input line; carries the 1-based line number when known."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + message)


class DropReason(Enum):
    BLANK = "blank"
    ORG = "org"
    LANG = "lang"


@dataclass
class UserRecord:
    """One profile row: bio text plus optional demographic/status fields.

    Optional fields are ``None`` when missing; category fields hold
    lowercase values from the documented sets.
    """

    user_id: str
    bio: str = ""
    last_status_lang: str | None = None
    verified: bool | None = None
    followers: int | None = None
    friends: int | None = None
    statuses: int | None = None
    sex: str | None = None
    party: str | None = None
    race: str | None = None
    age: float | None = None
    pct_rural: float | None = None


_FIELD_NAMES = tuple(f.name for f in fields(UserRecord))


def _parse_count(name: str, value, line_no: int | None) -> int:
    try:
        count = int(value)
    except (TypeError, ValueError):
        raise RecordParseError(f"field {name!r} is not an integer: {value!r}", line_no)
    if count < 0:
        raise RecordParseError(f"negative count for {name!r}: {count}", line_no)
    return count


def _parse_category(name: str, value, allowed: frozenset[str], line_no) -> str | None:
    cat = str(value).strip().lower()
    if cat in ("", "missing", "na", "none"):
        return None
    if cat not in allowed:
        raise RecordParseError(f"unknown {name} value: {value!r}", line_no)
    return cat


def _parse_bool(name: str, value, line_no) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("true", "1", "yes"):
        return True
    if text in ("false", "0", "no"):
        return False
    raise RecordParseError(f"field {name!r} is not a boolean: {value!r}", line_no)


def parse_user_record(
    line: str,
    schema: Iterable[str] | None = None,
    line_no: int | None = None,
) -> UserRecord:
    """Parse one JSON line into a validated UserRecord.

    ``schema`` restricts which field names are read; unknown fields in the
    input are ignored either way. Raises :class:`RecordParseError` on
    malformed JSON or invariant violations (negative counts, bad
    categories, pct_rural outside [0, 1]).
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordParseError(f"invalid JSON ({exc.msg})", line_no) from exc
    if not isinstance(obj, dict):
        raise RecordParseError("record is not a JSON object", line_no)

    wanted = set(schema) if schema is not None else set(_FIELD_NAMES)
    data = {k: v for k, v in obj.items() if k in wanted and v is not None}

    user_id = data.get("user_id")
    if user_id is None or str(user_id) == "":
        raise RecordParseError("missing user_id", line_no)

    rec = UserRecord(user_id=str(user_id), bio=str(data.get("bio", "")))

    if "last_status_lang" in data:
        lang = str(data["last_status_lang"]).strip().lower()
        rec.last_status_lang = lang or None
    if "verified" in data:
        rec.verified = _parse_bool("verified", data["verified"], line_no)
    for name in ("followers", "friends", "statuses"):
        if name in data:
            setattr(rec, name, _parse_count(name, data[name], line_no))
    if "sex" in data:
        rec.sex = _parse_category("sex", data["sex"], SEX_VALUES, line_no)
    if "party" in data:
        rec.party = _parse_category("party", data["party"], PARTY_VALUES, line_no)
    if "race" in data:
        rec.race = _parse_category("race", data["race"], RACE_VALUES, line_no)
    if "age" in data:
        try:
            age = float(data["age"])
        except (TypeError, ValueError):
            raise RecordParseError(f"field 'age' is not numeric: {data['age']!r}", line_no)
        if age < 0:
            raise RecordParseError(f"negative age: {age}", line_no)
        rec.age = age
    if "pct_rural" in data:
        try:
            pct = float(data["pct_rural"])
        except (TypeError, ValueError):
            raise RecordParseError(
                f"field 'pct_rural' is not numeric: {data['pct_rural']!r}", line_no
            )
        if not 0.0 <= pct <= 1.0:
            raise RecordParseError(f"pct_rural outside [0, 1]: {pct}", line_no)
        rec.pct_rural = pct
    return rec


def filter_account(
    record: UserRecord,
    allowed_langs: frozenset[str] | set[str] = DEFAULT_ALLOWED_LANGS,
) -> DropReason | None:
    """Return the reason to drop an account, or None to keep it.

    Checks run in order: blank bio, organizational markers, language.
    The language check compares the primary subtag of the last-status
    language; missing and "und" are kept.
    """
    if not record.bio.strip():
        return DropReason.BLANK
    lowered = record.bio.lower()
    if any(marker in lowered for marker in ORG_MARKERS):
        return DropReason.ORG
    lang = record.last_status_lang
    if lang is not None and lang != "und":
        primary = lang.split("-")[0]
        if primary not in allowed_langs:
            return DropReason.LANG
    return None


@dataclass
class FilterReport:
    """Counts from one filtering pass; merging partial reports is associative."""

    n_input: int = 0
    n_blank_bio: int = 0
    n_org_language: int = 0
    n_language_rejected: int = 0
    n_retained: int = 0
    n_parse_errors: int = 0

    def record(self, reason: DropReason | None) -> None:
        self.n_input += 1
        if reason is None:
            self.n_retained += 1
        elif reason is DropReason.BLANK:
            self.n_blank_bio += 1
        elif reason is DropReason.ORG:
            self.n_org_language += 1
        else:
            self.n_language_rejected += 1

    def merge(self, other: "FilterReport") -> "FilterReport":
        return FilterReport(
            n_input=self.n_input + other.n_input,
            n_blank_bio=self.n_blank_bio + other.n_blank_bio,
            n_org_language=self.n_org_language + other.n_org_language,
            n_language_rejected=self.n_language_rejected + other.n_language_rejected,
            n_retained=self.n_retained + other.n_retained,
            n_parse_errors=self.n_parse_errors + other.n_parse_errors,
        )

    def __add__(self, other: "FilterReport") -> "FilterReport":
        return self.merge(other)

    def to_dict(self) -> dict[str, int]:
        return {
            "n_input": self.n_input,
            "n_blank_bio": self.n_blank_bio,
            "n_org_language": self.n_org_language,
            "n_language_rejected": self.n_language_rejected,
            "n_retained": self.n_retained,
            "n_parse_errors": self.n_parse_errors,
        }


def load_corpus(
    path: str | Path,
    schema: Iterable[str] | None = None,
    allowed_langs: frozenset[str] | set[str] = DEFAULT_ALLOWED_LANGS,
) -> tuple[Iterator[UserRecord], FilterReport]:
    """Stream retained records from a JSONL file, tallying a FilterReport.

    Returns a lazy record iterator together with the report object; the
    report counts are final once the iterator is exhausted. Per-line parse
    errors are counted and skipped; an unreadable file raises.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    report = FilterReport()
    schema_set = set(schema) if schema is not None else None

    def _iter() -> Iterator[UserRecord]:
        with path.open("r", encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    record = parse_user_record(line, schema_set, line_no)
                except RecordParseError:
                    report.n_parse_errors += 1
                    continue
                reason = filter_account(record, allowed_langs)
                report.record(reason)
                if reason is None:
                    yield record

    return _iter(), report
