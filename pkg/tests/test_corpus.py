"""Record parsing and account filtering."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bioident.corpus import (
    DropReason,
    FilterReport,
    RecordParseError,
    UserRecord,
    filter_account,
    load_corpus,
    parse_user_record,
)


def test_parse_minimal_record():
    rec = parse_user_record('{"user_id":"u1","bio":"wife. mom."}')
    assert rec.user_id == "u1"
    assert rec.bio == "wife. mom."
    assert rec.sex is None and rec.age is None and rec.followers is None


def test_parse_negative_count_rejected():
    with pytest.raises(RecordParseError, match="negative count"):
        parse_user_record('{"user_id":"u2","bio":"x","followers":-3}', line_no=7)


def test_parse_error_carries_line_number():
    with pytest.raises(RecordParseError, match="line 7"):
        parse_user_record("not json", line_no=7)


def test_parse_demographics():
    rec = parse_user_record('{"user_id":"u3","bio":"runner","sex":"female","age":34}')
    assert rec.sex == "female"
    assert rec.age == 34.0


def test_parse_missing_markers_and_case():
    rec = parse_user_record(
        '{"user_id":"u4","bio":"x","sex":"MISSING","party":"Republican","race":null}'
    )
    assert rec.sex is None
    assert rec.party == "republican"
    assert rec.race is None


def test_parse_rejects_unknown_category():
    with pytest.raises(RecordParseError, match="unknown sex"):
        parse_user_record('{"user_id":"u5","bio":"x","sex":"robot"}')


def test_parse_rejects_pct_rural_out_of_range():
    with pytest.raises(RecordParseError, match="pct_rural"):
        parse_user_record('{"user_id":"u6","bio":"x","pct_rural":1.5}')


def test_parse_schema_restricts_fields():
    rec = parse_user_record(
        '{"user_id":"u7","bio":"x","age":50}', schema=["user_id", "bio"]
    )
    assert rec.age is None


def test_parse_ignores_unknown_fields():
    rec = parse_user_record('{"user_id":"u8","bio":"x","favorite_color":"teal"}')
    assert rec.user_id == "u8"


# -- filtering ----------------------------------------------------------------


def test_filter_blank_bio():
    assert filter_account(UserRecord("u", "")) is DropReason.BLANK
    assert filter_account(UserRecord("u", "   ")) is DropReason.BLANK


def test_filter_org_language():
    rec = UserRecord("u", "We are a family bakery", last_status_lang="en")
    assert filter_account(rec) is DropReason.ORG
    rec = UserRecord("u", "Not affiliated with anyone")
    assert filter_account(rec) is DropReason.ORG


def test_filter_language():
    assert filter_account(UserRecord("u", "runner", last_status_lang="fr")) is DropReason.LANG
    assert filter_account(UserRecord("u", "runner", last_status_lang=None)) is None
    assert filter_account(UserRecord("u", "runner", last_status_lang="und")) is None
    assert filter_account(UserRecord("u", "runner", last_status_lang="es")) is None
    assert filter_account(UserRecord("u", "runner", last_status_lang="en-gb")) is None


def test_filter_order_blank_before_org():
    # A blank bio cannot contain org markers, so BLANK wins trivially; an
    # org bio in a rejected language must still report as ORG.
    rec = UserRecord("u", "we are the robots", last_status_lang="de")
    assert filter_account(rec) is DropReason.ORG


def test_filter_is_pure():
    rec = UserRecord("u", "runner", last_status_lang="fr")
    assert filter_account(rec) == filter_account(rec)


# -- load_corpus ---------------------------------------------------------------


def _write_jsonl(path, records):
    path.write_text(
        "".join(json.dumps(r) + "\n" for r in records), encoding="utf-8"
    )


def test_load_corpus_counts(tmp_path):
    path = tmp_path / "bios.jsonl"
    _write_jsonl(
        path,
        [
            {"user_id": "a", "bio": ""},
            {"user_id": "b", "bio": "not affiliated with anyone"},
            {"user_id": "c", "bio": "runner"},
            {"user_id": "d", "bio": "wife, mom"},
        ],
    )
    stream, report = load_corpus(path)
    retained = list(stream)
    assert [r.user_id for r in retained] == ["c", "d"]
    assert report.to_dict() == {
        "n_input": 4, "n_blank_bio": 1, "n_org_language": 1,
        "n_language_rejected": 0, "n_retained": 2, "n_parse_errors": 0,
    }


def test_load_corpus_empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("", encoding="utf-8")
    stream, report = load_corpus(path)
    assert list(stream) == []
    assert report.n_input == 0 and report.n_retained == 0


def test_load_corpus_all_blank(tmp_path):
    path = tmp_path / "blank.jsonl"
    _write_jsonl(path, [{"user_id": f"u{i}", "bio": ""} for i in range(5)])
    stream, report = load_corpus(path)
    assert list(stream) == []
    assert report.n_blank_bio == report.n_input == 5
    assert report.n_retained == 0


def test_load_corpus_parse_errors_counted(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"user_id":"a","bio":"runner"}\n{broken\n', encoding="utf-8")
    stream, report = load_corpus(path)
    assert len(list(stream)) == 1
    assert report.n_parse_errors == 1
    assert report.n_input == 1


def test_load_corpus_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_corpus(tmp_path / "nope.jsonl")


def test_report_merge_associative():
    a = FilterReport(4, 1, 1, 0, 2, 1)
    b = FilterReport(3, 0, 1, 1, 1, 0)
    c = FilterReport(2, 1, 0, 0, 1, 2)
    assert (a + b) + c == a + (b + c)
    total = a + b + c
    assert total.n_input == 9
    assert total.n_retained == total.n_input - total.n_blank_bio \
        - total.n_org_language - total.n_language_rejected


_reasons = st.sampled_from(["", "we are us", "runner", "corredora"])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(_reasons, st.sampled_from(["en", "es", "fr", None]))))
def test_report_invariant_under_permutation(rows):
    records = [
        UserRecord(f"u{i}", bio, last_status_lang=lang)
        for i, (bio, lang) in enumerate(rows)
    ]
    def tally(rs):
        report = FilterReport()
        for r in rs:
            report.record(filter_account(r))
        return report
    forward = tally(records)
    backward = tally(list(reversed(records)))
    assert forward == backward
    assert forward.n_retained == forward.n_input - forward.n_blank_bio \
        - forward.n_org_language - forward.n_language_rejected
