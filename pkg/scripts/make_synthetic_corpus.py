#!/usr/bin/env python3
"""Generate a synthetic profile corpus as JSONL.

Bios are built from a heavy-tailed phrase vocabulary joined by realistic
delimiters, with optional demographics, a sprinkle of blank/organizational/
non-English records to exercise the filters, and a median length around 70
characters. Deterministic for a fixed seed.

Usage:
    python scripts/make_synthetic_corpus.py --n 100000 --seed 7 --output bios.jsonl
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Iterator

BASE_TERMS = [
    "wife", "husband", "mom", "dad", "father", "mother", "teacher", "runner",
    "gamer", "writer", "nurse", "engineer", "artist", "dreamer", "believer",
    "foodie", "traveler", "student", "veteran", "musician", "photographer",
    "entrepreneur", "blogger", "coach", "pastor", "farmer", "designer",
    "developer", "scientist", "chef", "baker", "lawyer", "doctor", "professor",
    "poet", "dancer", "singer", "hiker", "biker", "reader", "thinker", "maker",
    "builder", "speaker", "dreamer", "patriot", "activist", "volunteer",
    "mentor", "investor", "analyst", "realtor", "barista", "librarian",
]
MODIFIERS = [
    "proud", "happy", "retired", "aspiring", "former", "future", "lifelong",
    "amateur", "professional", "certified", "recovering", "unapologetic",
    "freelance", "award winning", "self proclaimed", "part time",
]
OBJECTS = [
    "coffee", "dog", "cat", "music", "sports", "books", "travel", "food",
    "wine", "craft beer", "yoga", "fitness", "history", "science", "art",
    "nature", "baseball", "basketball", "soccer", "hockey", "gardening",
]
SUFFIXES = ["lover", "enthusiast", "addict", "fan", "nerd", "geek", "junkie"]
PRONOUNS = ["she/her", "he/him", "they/them"]
FLUFF = [
    "views are my own", "tweets are my own", "opinions mine",
    "rt does not equal endorsement", "living my best life",
    "one day at a time", "all views expressed here are my own opinion only",
]
DELIMS = [", ", ". ", " | ", " • ", "; ", " \U0001f499 ", " · "]
LANGS = ["en"] * 90 + ["es"] * 5 + [None] * 3 + ["und"] * 1 + ["fr"] * 1


def build_vocabulary(rng: random.Random) -> list[str]:
    vocab = list(BASE_TERMS) + PRONOUNS
    for mod in MODIFIERS:
        for term in BASE_TERMS:
            vocab.append(f"{mod} {term}")
    for obj in OBJECTS:
        for suf in SUFFIXES:
            vocab.append(f"{obj} {suf}")
    for term in BASE_TERMS:
        vocab.append(f"{term} of two")
        vocab.append(f"{term} at heart")
    rng.shuffle(vocab)
    return vocab


def generate_records(n: int, seed: int = 0) -> Iterator[dict]:
    rng = random.Random(seed)
    vocab = build_vocabulary(rng)
    # zipf-ish weights make a heavy-tailed phrase distribution
    weights = [1.0 / (rank + 1) for rank in range(len(vocab))]
    for i in range(n):
        user_id = f"u{i:08d}"
        roll = rng.random()
        if roll < 0.02:
            yield {"user_id": user_id, "bio": ""}
            continue
        if roll < 0.025:
            yield {"user_id": user_id, "bio": "We are a local business account"}
            continue

        n_phrases = rng.choices([1, 2, 3, 4, 5, 6], weights=[5, 15, 25, 27, 18, 10])[0]
        parts = rng.choices(vocab, weights=weights, k=n_phrases)
        if rng.random() < 0.25:
            parts.append(rng.choice(FLUFF))
        if rng.random() < 0.08:
            parts.append(f"https://t.co/{rng.randrange(16**6):06x}")
        bio = rng.choice(DELIMS).join(parts)

        record: dict = {"user_id": user_id, "bio": bio}
        lang = rng.choice(LANGS)
        if lang is not None:
            record["last_status_lang"] = lang
        if rng.random() < 0.91:
            record["sex"] = rng.choice(["male", "female"])
        if rng.random() < 0.36:
            record["party"] = rng.choice(["democrat", "democrat", "republican", "other"])
        if rng.random() < 0.93:
            record["race"] = rng.choices(
                ["white", "black", "hispanic", "asian", "other"],
                weights=[85, 8, 5, 2, 3],
            )[0]
        if rng.random() < 0.95:
            record["age"] = rng.randint(18, 95)
            record["pct_rural"] = round(rng.random() * rng.random(), 4)
        record["followers"] = int(rng.paretovariate(1.2) * 40)
        record["friends"] = int(rng.paretovariate(1.3) * 80)
        record["statuses"] = int(rng.paretovariate(1.1) * 200)
        record["verified"] = rng.random() < 0.008
        yield record


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--output", required=True)
    args = parser.parse_args(argv)
    with open(args.output, "w", encoding="utf-8") as out:
        for record in generate_records(args.n, args.seed):
            out.write(json.dumps(record, separators=(",", ":")) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
