import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bioident.corpus import UserRecord
from bioident.extractor import extract_identifiers
from bioident.indexing import IdentifierIndex
from bioident.rules import default_rules


@pytest.fixture(scope="session")
def rules():
    return default_rules()


@pytest.fixture()
def toy_index(rules):
    """Small index with demographics: 6 users, phrases with known tallies."""
    users = [
        UserRecord("u1", "wife. mom. runner", sex="female", age=34.0,
                   friends=200, followers=100),
        UserRecord("u2", "wife. teacher", sex="female", age=40.0),
        UserRecord("u3", "father. runner", sex="male", age=52.0,
                   friends=50, followers=500),
        UserRecord("u4", "father. gamer", sex="male"),
        UserRecord("u5", "father. runner", sex="male", age=30.0),
        UserRecord("u6", "runner", age=20.0),
    ]
    index = IdentifierIndex()
    for user in users:
        index.add(user, extract_identifiers(user.bio, rules, source_user=user.user_id))
    return index


def make_index(counts: dict[str, int], token_counts: dict[str, int] | None = None):
    """Index stub with given bio counts (users synthesized)."""
    from bioident.extractor import PhraseRecord

    index = IdentifierIndex()
    next_user = 0
    for phrase, count in counts.items():
        tokens = (token_counts or {}).get(phrase, len(phrase.split()))
        for _ in range(count):
            user = UserRecord(f"user{next_user}", bio=phrase)
            next_user += 1
            index.add(user, [PhraseRecord(text=phrase, token_count=tokens)])
    return index
