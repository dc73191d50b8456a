#!/usr/bin/env python3
"""End-to-end pipeline demo on a synthetic corpus.

Generates profiles, then drives every CLI subcommand and prints where the
outputs landed. Useful as a smoke test and as copy-paste documentation.

Usage:
    python scripts/run_demo.py --workdir demo_out --n 20000 --seed 7
"""

from __future__ import annotations

import argparse
import json
import subprocess
import sys
from pathlib import Path

from make_synthetic_corpus import generate_records


def cli(*args: object) -> None:
    cmd = [sys.executable, "-m", "bioident.cli", *[str(a) for a in args]]
    print("+", " ".join(cmd[2:]))
    subprocess.run(cmd, check=True)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", default="demo_out")
    parser.add_argument("--n", type=int, default=20_000)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args(argv)

    work = Path(args.workdir)
    work.mkdir(parents=True, exist_ok=True)
    bios = work / "bios.jsonl"
    with bios.open("w", encoding="utf-8") as out:
        for record in generate_records(args.n, args.seed):
            out.write(json.dumps(record, separators=(",", ":")) + "\n")
    print(f"wrote {args.n} synthetic profiles to {bios}")

    lexicon = work / "lexicon.csv"
    lexicon.write_text(
        "term,evaluation,power,activity\n"
        "wife,1.4,0.3,0.2\nhusband,1.2,0.8,0.4\nmom,1.5,0.5,0.9\n"
        "teacher,1.3,0.9,0.5\nrunner,0.9,0.4,1.6\nnurse,1.6,0.6,0.8\n"
        "astronaut,1.1,1.3,0.7\nvillain,-1.8,0.9,0.6\n",
        encoding="utf-8",
    )

    cli("extract", "--input", bios, "--output", work / "extract")
    cli("index", "--input", bios, "--output", work / "index")
    cli("index", "--input", bios, "--output", work / "index_all", "--max-tokens", "0")
    index_tsv = work / "index" / "index.tsv"

    cli("contrast", "--index", index_tsv, "--attribute", "sex",
        "--top", "10", "--min-bios", "10", "--output", work / "contrast")
    cli("continuous", "--index", index_tsv, "--attribute", "age",
        "--top", "10", "--min-bios", "10", "--output", work / "continuous")
    cli("cluster", "--phrases", work / "extract" / "phrases.tsv",
        "--k", "10", "--seed", args.seed, "--min-bio-count", "20",
        "--min-user-identifiers", "1", "--output", work / "cluster")
    cli("overlap", "--index", index_tsv, "--lexicon", lexicon,
        "--min-remaining", "0", "--output", work / "overlap")
    cli("meaning", "--index", index_tsv, "--lexicon", lexicon,
        "--seed", args.seed, "--output", work / "meaning")
    cli("sample-stratified", "--index", work / "index_all" / "index.tsv",
        "--per-cell", "30", "--seed", args.seed, "--output", work / "samples")
    cli("sample-prob", "--index", index_tsv, "--n", "200",
        "--seed", args.seed, "--output", work / "samples")
    cli("correlate", "--index-a", index_tsv, "--index-b", index_tsv,
        "--output", work / "correlate")
    cli("report", "--index", index_tsv, "--output", work / "report")

    # fabricate two annotators over the stratified sample, then score them
    key = work / "samples" / "sample_stratified_key.tsv"
    labels = work / "labels.tsv"
    rows = ["item_id\tannotator_id\tlabel"]
    for line in key.read_text(encoding="utf-8").splitlines():
        if line.startswith(("#", "item_id")) or not line:
            continue
        item_id = line.split("\t")[0]
        pick = int(item_id[1:])
        rows.append(f"{item_id}\tr1\t{'yes' if pick % 5 else 'no'}")
        rows.append(f"{item_id}\tr2\t{'yes' if pick % 4 else 'unclear'}")
    labels.write_text("\n".join(rows) + "\n", encoding="utf-8")
    cli("reliability", "--key", key, "--labels", labels,
        "--output", work / "reliability")

    print(f"\nall outputs under {work}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
