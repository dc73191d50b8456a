"""Command-line pipeline: each subcommand reads files, writes files.

Subcommands compose through their outputs only; every run writes a
manifest recording inputs, options and seed so it can be replayed
exactly. Seeded commands are byte-reproducible for a fixed config (run
clustering single-threaded when comparing bytes).
"""

from __future__ import annotations

import json
from multiprocessing import Pool
from pathlib import Path

import click

from . import __version__
from .annotation import (
    AnnotationItem,
    merge_annotations,
    probabilistic_sample,
    stratified_sample,
)
from .cocluster import CoClusterConfig, spectral_cocluster
from .corpus import (
    DEFAULT_ALLOWED_LANGS,
    FilterReport,
    UserRecord,
    filter_account,
    parse_user_record,
)
from .extractor import PhraseRecord, extract_identifiers
from .indexing import IdentifierIndex, build_matrix
from .lexicon import load_lexicon, meaning_comparison, overlap_curve
from .rules import RuleSet, default_rules, load_rules
from .stats import (
    CATEGORY_SIDES,
    continuous_mean_ranking,
    count_correlation,
    rank_by_category,
)

RULES_ENV_VAR = "BIOIDENT_RULES"


def _resolve_rules(rules_path: str | None) -> tuple[RuleSet, str]:
    if rules_path:
        return load_rules(rules_path), str(rules_path)
    return default_rules(), "<default>"


def _write_tsv(path: Path, header: list[str], rows, manifest: dict) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as out:
        for key in ("tool", "command", "seed"):
            if key in manifest:
                out.write(f"# {key}={manifest[key]}\n")
        out.write("\t".join(header) + "\n")
        for row in rows:
            out.write("\t".join(str(cell) for cell in row) + "\n")


def _write_manifest(outdir: Path, command: str, manifest: dict) -> None:
    path = outdir / f"{command}_manifest.json"
    with path.open("w", encoding="utf-8") as out:
        json.dump(manifest, out, indent=2, sort_keys=True)
        out.write("\n")


def _manifest(command: str, seed=None, **config) -> dict:
    entry = {
        "tool": f"bioident {__version__}",
        "command": command,
        "config": {k: v for k, v in sorted(config.items())},
    }
    if seed is not None:
        entry["seed"] = seed
    return entry


def _fmt(value: float) -> str:
    return f"{value:.6f}"


class _Fail(click.ClickException):
    exit_code = 1


def _run_guarded(fn):
    try:
        fn()
    except click.ClickException:
        raise
    except FileNotFoundError as exc:
        raise _Fail(f"input not found: {exc}") from exc
    except (ValueError, OSError, RuntimeError) as exc:
        raise _Fail(str(exc)) from exc


@click.group()
@click.version_option(version=__version__, prog_name="bioident")
def main() -> None:
    """Extract identity phrases from profile bios and analyze them."""


_input_opt = click.option(
    "--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False),
    help="JSONL file of profile records.",
)
_rules_opt = click.option(
    "--rules", "rules_path", envvar=RULES_ENV_VAR, default=None,
    type=click.Path(exists=True, dir_okay=False),
    help=f"Rules file (default: built-in; env {RULES_ENV_VAR}).",
)
_output_opt = click.option(
    "--output", "output_dir", required=True,
    type=click.Path(file_okay=False, path_type=Path),
    help="Directory for output files.",
)
_langs_opt = click.option(
    "--langs", default="en,es", show_default=True,
    help="Comma-separated allowed last-status languages.",
)
_max_tokens_opt = click.option(
    "--max-tokens", default=3, show_default=True,
    help="Token-length cutoff for retained phrases; 0 keeps all lengths.",
)
_threads_opt = click.option(
    "--threads", default=1, show_default=True,
    help="Worker processes for extraction; results do not depend on it.",
)
_index_opt = click.option(
    "--index", "index_path", required=True, type=click.Path(exists=True, dir_okay=False),
    help="Index dump produced by the index subcommand.",
)
_seed_opt = click.option("--seed", default=0, show_default=True, help="Random seed.")


def _extract_chunk(args) -> tuple[FilterReport, list[tuple[UserRecord, list]]]:
    lines, rules, langs, max_tokens, start_line = args
    report = FilterReport()
    out = []
    for offset, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            record = parse_user_record(line, None, start_line + offset)
        except ValueError:
            report.n_parse_errors += 1
            continue
        reason = filter_account(record, langs)
        report.record(reason)
        if reason is None:
            phrases = extract_identifiers(
                record.bio, rules, source_user=record.user_id, max_tokens=max_tokens
            )
            out.append((record, phrases))
    return report, out


def _iter_extracted(input_path, rules, langs, max_tokens, threads, chunk_size=20_000):
    """Yield (record, phrases) pairs in input order plus a shared report."""
    report = FilterReport()

    def _chunks():
        with open(input_path, "r", encoding="utf-8") as handle:
            batch: list[str] = []
            start = 1
            for line_no, line in enumerate(handle, start=1):
                batch.append(line)
                if len(batch) >= chunk_size:
                    yield batch, rules, langs, max_tokens, start
                    batch = []
                    start = line_no + 1
            if batch:
                yield batch, rules, langs, max_tokens, start

    def _gen():
        nonlocal report
        if threads <= 1:
            for chunk in _chunks():
                part, pairs = _extract_chunk(chunk)
                report = report.merge(part)
                yield from pairs
        else:
            with Pool(processes=threads) as pool:
                for part, pairs in pool.imap(_extract_chunk, _chunks()):
                    report = report.merge(part)
                    yield from pairs

    return _gen(), lambda: report


@main.command()
@_input_opt
@_rules_opt
@_output_opt
@_langs_opt
@_max_tokens_opt
@_threads_opt
def extract(input_path, rules_path, output_dir, langs, max_tokens, threads) -> None:
    """Extract phrases per user; writes phrases.tsv and filter_report.json."""

    def _do():
        rules, rules_label = _resolve_rules(rules_path)
        allowed = frozenset(langs.split(",")) if langs else DEFAULT_ALLOWED_LANGS
        max_tok = max_tokens if max_tokens > 0 else None
        output_dir.mkdir(parents=True, exist_ok=True)
        pairs, final_report = _iter_extracted(input_path, rules, allowed, max_tok, threads)
        manifest = _manifest(
            "extract", input=str(input_path), rules=rules_label,
            langs=sorted(allowed), max_tokens=max_tokens, threads=threads,
        )
        rows = (
            (rec.user_id, p.position, p.text, p.token_count)
            for rec, phrases in pairs
            for p in phrases
        )
        _write_tsv(
            output_dir / "phrases.tsv",
            ["user_id", "position", "phrase", "token_count"],
            rows,
            manifest,
        )
        report = final_report()
        with (output_dir / "filter_report.json").open("w", encoding="utf-8") as out:
            json.dump(report.to_dict(), out, indent=2)
            out.write("\n")
        _write_manifest(output_dir, "extract", manifest)
        click.echo(
            f"retained {report.n_retained}/{report.n_input} records "
            f"({report.n_parse_errors} parse errors)"
        )

    _run_guarded(_do)


@main.command()
@_input_opt
@_rules_opt
@_output_opt
@_langs_opt
@_max_tokens_opt
@_threads_opt
def index(input_path, rules_path, output_dir, langs, max_tokens, threads) -> None:
    """Build the identifier index; writes index.tsv."""

    def _do():
        rules, rules_label = _resolve_rules(rules_path)
        allowed = frozenset(langs.split(",")) if langs else DEFAULT_ALLOWED_LANGS
        max_tok = max_tokens if max_tokens > 0 else None
        output_dir.mkdir(parents=True, exist_ok=True)
        pairs, final_report = _iter_extracted(input_path, rules, allowed, max_tok, threads)
        idx = IdentifierIndex()
        for record, phrases in pairs:
            idx.add(record, phrases)
        manifest = _manifest(
            "index", input=str(input_path), rules=rules_label,
            langs=sorted(allowed), max_tokens=max_tokens, threads=threads,
        )
        header, rows = idx.dump_rows()
        _write_tsv(output_dir / "index.tsv", header, rows, manifest)
        with (output_dir / "filter_report.json").open("w", encoding="utf-8") as out:
            json.dump(final_report().to_dict(), out, indent=2)
            out.write("\n")
        _write_manifest(output_dir, "index", manifest)
        click.echo(f"indexed {len(idx)} distinct phrases")

    _run_guarded(_do)


def _load_index_dump(path: str | Path) -> IdentifierIndex:
    header: list[str] | None = None
    rows = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            cells = line.split("\t")
            if header is None:
                header = cells
            else:
                rows.append(cells)
    if header is None:
        raise ValueError(f"{path}: empty index dump")
    return IdentifierIndex.from_rows(header, rows)


@main.command()
@_index_opt
@click.option("--attribute", required=True, help="Categorical attribute (sex, party, race, verified).")
@click.option("--top", default=10, show_default=True, help="Rows per side.")
@click.option("--min-bios", default=10, show_default=True)
@click.option("--prior", default=0.01, show_default=True, help="Dirichlet pseudo-count.")
@_output_opt
def contrast(index_path, attribute, top, min_bios, prior, output_dir) -> None:
    """Rank phrases by normalized log-odds for both sides of an attribute."""

    def _do():
        idx = _load_index_dump(index_path)
        if attribute not in CATEGORY_SIDES:
            raise ValueError(f"unknown categorical attribute: {attribute!r}")
        output_dir.mkdir(parents=True, exist_ok=True)
        manifest = _manifest(
            "contrast", index=str(index_path), attribute=attribute,
            top=top, min_bios=min_bios, prior=prior,
        )
        rows = []
        for side in sorted(CATEGORY_SIDES[attribute]):
            for rank, row in enumerate(
                rank_by_category(idx, attribute, side, top, min_bios, prior), start=1
            ):
                rows.append(
                    (
                        attribute, side, rank, row.phrase, row.count_a, row.count_b,
                        row.n_a, row.n_b, _fmt(row.raw_log_odds),
                        _fmt(row.normalized_log_odds), row.bio_count,
                    )
                )
        _write_tsv(
            output_dir / f"contrast_{attribute}.tsv",
            [
                "attribute", "side", "rank", "phrase", "count_side", "count_other",
                "total_side", "total_other", "raw_log_odds", "normalized_log_odds",
                "bio_count",
            ],
            rows,
            manifest,
        )
        _write_manifest(output_dir, "contrast", manifest)

    _run_guarded(_do)


@main.command()
@_index_opt
@click.option("--attribute", required=True, help="Continuous attribute (age, pct_rural, status_ratio).")
@click.option("--top", default=10, show_default=True, help="Rows per side.")
@click.option("--min-bios", default=10, show_default=True)
@_output_opt
def continuous(index_path, attribute, top, min_bios, output_dir) -> None:
    """Rank phrases by highest and lowest mean attribute value."""

    def _do():
        idx = _load_index_dump(index_path)
        output_dir.mkdir(parents=True, exist_ok=True)
        manifest = _manifest(
            "continuous", index=str(index_path), attribute=attribute,
            top=top, min_bios=min_bios,
        )
        rows = []
        for side in ("high", "low"):
            ranking = continuous_mean_ranking(idx, attribute, side, top, min_bios)
            for rank, (phrase, mean) in enumerate(ranking, start=1):
                rows.append((attribute, side, rank, phrase, _fmt(mean)))
        _write_tsv(
            output_dir / f"continuous_{attribute}.tsv",
            ["attribute", "side", "rank", "phrase", "mean"],
            rows,
            manifest,
        )
        _write_manifest(output_dir, "continuous", manifest)

    _run_guarded(_do)


@main.command()
@click.option(
    "--phrases", "phrases_path", required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="phrases.tsv from the extract subcommand.",
)
@click.option("--k", default=100, show_default=True, help="Number of clusters.")
@click.option("--min-bio-count", default=100, show_default=True)
@click.option("--min-user-identifiers", default=1, show_default=True)
@click.option("--svd-dim", default=0, show_default=True, help="Singular vectors (0 = ceil(log2 k)).")
@click.option("--restarts", default=10, show_default=True)
@click.option("--max-iter", default=300, show_default=True)
@_seed_opt
@_output_opt
def cluster(
    phrases_path, k, min_bio_count, min_user_identifiers, svd_dim,
    restarts, max_iter, seed, output_dir,
) -> None:
    """Co-cluster identifiers and users; writes cluster label files."""

    def _do():
        idx = IdentifierIndex()
        with open(phrases_path, "r", encoding="utf-8") as handle:
            header: list[str] | None = None
            for line in handle:
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                cells = line.split("\t")
                if header is None:
                    header = cells
                    continue
                user_id, _, phrase, token_count = cells[:4]
                idx.add(
                    UserRecord(user_id=user_id, bio="."),
                    [PhraseRecord(text=phrase, token_count=int(token_count),
                                  source_user=user_id)],
                )
        bipartite = build_matrix(idx, min_bio_count, min_user_identifiers)
        cfg = CoClusterConfig(
            k=k,
            n_singular_vectors=svd_dim or None,
            kmeans_restarts=restarts,
            max_iterations=max_iter,
            seed=seed,
        )
        result = spectral_cocluster(bipartite, cfg)

        output_dir.mkdir(parents=True, exist_ok=True)
        manifest = _manifest(
            "cluster", seed=seed, phrases=str(phrases_path), k=k,
            min_bio_count=min_bio_count, min_user_identifiers=min_user_identifiers,
            svd_dim=svd_dim, restarts=restarts, max_iter=max_iter,
            matrix_shape=list(bipartite.shape), objective=result.objective,
        )
        _write_tsv(
            output_dir / "identifier_clusters.tsv",
            ["identifier", "cluster"],
            zip(bipartite.rows, result.row_labels),
            manifest,
        )
        _write_tsv(
            output_dir / "user_clusters.tsv",
            ["user", "cluster"],
            zip(bipartite.cols, result.col_labels),
            manifest,
        )
        coo = bipartite.matrix.tocoo()
        _write_tsv(
            output_dir / "matrix.tsv",
            ["row", "col", "value"],
            zip(coo.row, coo.col, coo.data.astype(int)),
            manifest,
        )
        (output_dir / "matrix_rows.txt").write_text(
            "".join(f"{r}\n" for r in bipartite.rows), encoding="utf-8"
        )
        (output_dir / "matrix_cols.txt").write_text(
            "".join(f"{c}\n" for c in bipartite.cols), encoding="utf-8"
        )

        degrees = {
            phrase: int(deg)
            for phrase, deg in zip(
                bipartite.rows, bipartite.matrix.sum(axis=1).A.ravel()
            )
        }
        summary_rows = []
        for cid in range(k):
            members = [
                phrase
                for phrase, label in zip(bipartite.rows, result.row_labels)
                if label == cid
            ]
            members.sort(key=lambda p: (-degrees[p], p))
            n_users = int((result.col_labels == cid).sum())
            summary_rows.append(
                (cid, len(members), n_users, ", ".join(members[:15]))
            )
        _write_tsv(
            output_dir / "cluster_summary.tsv",
            ["cluster", "n_identifiers", "n_users", "top_identifiers"],
            summary_rows,
            manifest,
        )
        _write_manifest(output_dir, "cluster", manifest)
        click.echo(
            f"clustered {len(bipartite.rows)} identifiers x {len(bipartite.cols)} users "
            f"into {k} clusters (objective {result.objective:.4f})"
        )

    _run_guarded(_do)


@main.command()
@_index_opt
@click.option(
    "--lexicon", "lexicon_path", required=True,
    type=click.Path(exists=True, dir_okay=False), help="Lexicon CSV file.",
)
@click.option("--name", default=None, help="Lexicon name (default: file stem).")
@click.option("--thresholds", default=None, help="Comma-separated cutoffs (default: log sweep).")
@click.option("--min-remaining", default=100, show_default=True)
@_output_opt
def overlap(index_path, lexicon_path, name, thresholds, min_remaining, output_dir) -> None:
    """Fraction of frequent identifiers present in a lexicon."""

    def _do():
        idx = _load_index_dump(index_path)
        lex = load_lexicon(lexicon_path, name)
        grid = (
            [int(t) for t in thresholds.split(",")] if thresholds else None
        )
        curve = overlap_curve(idx, lex, grid, min_remaining)
        output_dir.mkdir(parents=True, exist_ok=True)
        manifest = _manifest(
            "overlap", index=str(index_path), lexicon=str(lexicon_path),
            name=lex.name, thresholds=thresholds, min_remaining=min_remaining,
        )
        _write_tsv(
            output_dir / f"overlap_{lex.name}.tsv",
            ["threshold", "n_remaining", "fraction_in_lexicon"],
            (
                (t, n, _fmt(f))
                for t, n, f in zip(curve.thresholds, curve.n_remaining, curve.fractions)
            ),
            manifest,
        )
        _write_manifest(output_dir, "overlap", manifest)

    _run_guarded(_do)


@main.command()
@_index_opt
@click.option(
    "--lexicon", "lexicon_path", required=True,
    type=click.Path(exists=True, dir_okay=False), help="Lexicon CSV file.",
)
@click.option("--name", default=None, help="Lexicon name (default: file stem).")
@click.option("--resamples", default=1000, show_default=True)
@click.option("--confidence", default=0.95, show_default=True)
@_seed_opt
@_output_opt
def meaning(index_path, lexicon_path, name, resamples, confidence, seed, output_dir) -> None:
    """Scaled meaning-dimension means split by presence in the corpus."""

    def _do():
        idx = _load_index_dump(index_path)
        lex = load_lexicon(lexicon_path, name)
        results = meaning_comparison(idx, lex, resamples, seed, confidence)
        output_dir.mkdir(parents=True, exist_ok=True)
        manifest = _manifest(
            "meaning", seed=seed, index=str(index_path), lexicon=str(lexicon_path),
            name=lex.name, resamples=resamples, confidence=confidence,
        )
        _write_tsv(
            output_dir / f"meaning_{lex.name}.tsv",
            [
                "dimension", "n_present", "present_mean", "present_lower",
                "present_upper", "n_absent", "absent_mean", "absent_lower",
                "absent_upper",
            ],
            (
                (
                    r.dimension, r.n_present, _fmt(r.present_mean),
                    _fmt(r.present_lower), _fmt(r.present_upper), r.n_absent,
                    _fmt(r.absent_mean), _fmt(r.absent_lower), _fmt(r.absent_upper),
                )
                for r in results
            ),
            manifest,
        )
        _write_manifest(output_dir, "meaning", manifest)

    _run_guarded(_do)


def _write_sample(items, output_dir: Path, stem: str, manifest: dict) -> None:
    _write_tsv(
        output_dir / f"{stem}.tsv",
        ["item_id", "phrase"],
        ((item.item_id, item.phrase) for item in items),
        manifest,
    )
    _write_tsv(
        output_dir / f"{stem}_key.tsv",
        ["item_id", "phrase", "token_bucket", "bio_count_bucket"],
        (
            (item.item_id, item.phrase, item.token_bucket, item.bio_count_bucket)
            for item in items
        ),
        manifest,
    )


@main.command("sample-stratified")
@_index_opt
@click.option("--per-cell", default=30, show_default=True)
@_seed_opt
@_output_opt
def sample_stratified(index_path, per_cell, seed, output_dir) -> None:
    """Stratified annotation sample over token/bio-count cells.

    Build the index with --max-tokens 0 to populate the 4+ token cells.
    """

    def _do():
        idx = _load_index_dump(index_path)
        items = stratified_sample(idx, per_cell, seed)
        output_dir.mkdir(parents=True, exist_ok=True)
        manifest = _manifest(
            "sample-stratified", seed=seed, index=str(index_path), per_cell=per_cell,
        )
        _write_sample(items, output_dir, "sample_stratified", manifest)
        _write_manifest(output_dir, "sample-stratified", manifest)
        click.echo(f"sampled {len(items)} items")

    _run_guarded(_do)


@main.command("sample-prob")
@_index_opt
@click.option("--n", "n_items", default=200, show_default=True)
@_seed_opt
@_output_opt
def sample_prob(index_path, n_items, seed, output_dir) -> None:
    """Sample phrases with probability proportional to bio count."""

    def _do():
        idx = _load_index_dump(index_path)
        items = probabilistic_sample(idx, n_items, seed)
        output_dir.mkdir(parents=True, exist_ok=True)
        manifest = _manifest(
            "sample-prob", seed=seed, index=str(index_path), n=n_items,
        )
        _write_sample(items, output_dir, "sample_prob", manifest)
        _write_manifest(output_dir, "sample-prob", manifest)
        click.echo(f"sampled {len(items)} items")

    _run_guarded(_do)


@main.command()
@click.option(
    "--key", "key_path", required=True, type=click.Path(exists=True, dir_okay=False),
    help="sample *_key.tsv with bucket metadata.",
)
@click.option(
    "--labels", "label_paths", required=True, multiple=True,
    type=click.Path(exists=True, dir_okay=False),
    help="Label file(s): item_id, annotator_id, label.",
)
@click.option("--confidence", default=0.95, show_default=True)
@_output_opt
def reliability(key_path, label_paths, confidence, output_dir) -> None:
    """Krippendorff's alpha and per-bucket identifier proportions."""

    def _do():
        items = []
        with open(key_path, "r", encoding="utf-8") as handle:
            header = None
            for line in handle:
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                cells = line.split("\t")
                if header is None:
                    header = cells
                    continue
                items.append(
                    AnnotationItem(
                        item_id=cells[0], phrase=cells[1],
                        token_bucket=cells[2], bio_count_bucket=cells[3],
                    )
                )
        merged = merge_annotations(items, list(label_paths), confidence)
        output_dir.mkdir(parents=True, exist_ok=True)
        manifest = _manifest(
            "reliability", key=str(key_path), labels=[str(p) for p in label_paths],
            confidence=confidence,
        )
        alpha_excl = (
            _fmt(merged.alpha_excluding_unclear)
            if merged.alpha_excluding_unclear is not None
            else "NA"
        )
        _write_tsv(
            output_dir / "reliability_summary.tsv",
            ["metric", "value"],
            [
                ("alpha_including_unclear", _fmt(merged.alpha_including_unclear)),
                ("alpha_excluding_unclear", alpha_excl),
                ("n_items_labeled", merged.n_items_labeled),
                ("n_items_excluded_for_unclear", merged.n_items_excluded),
            ],
            manifest,
        )
        _write_tsv(
            output_dir / "reliability_buckets.tsv",
            [
                "token_bucket", "bio_count_bucket", "n_items",
                "yes_fraction", "yes_lower", "yes_upper",
                "no_fraction", "no_lower", "no_upper",
                "unclear_fraction", "unclear_lower", "unclear_upper",
            ],
            (
                (
                    b.token_bucket, b.bio_count_bucket, b.n_items,
                    _fmt(b.yes.successes / b.n_items), _fmt(b.yes.lower), _fmt(b.yes.upper),
                    _fmt(b.no.successes / b.n_items), _fmt(b.no.lower), _fmt(b.no.upper),
                    _fmt(b.unclear.successes / b.n_items), _fmt(b.unclear.lower),
                    _fmt(b.unclear.upper),
                )
                for b in merged.buckets
            ),
            manifest,
        )
        _write_manifest(output_dir, "reliability", manifest)
        click.echo(
            f"alpha={merged.alpha_including_unclear:.4f} "
            f"(excluding unclear: {alpha_excl})"
        )

    _run_guarded(_do)


@main.command()
@click.option(
    "--index-a", "index_a_path", required=True,
    type=click.Path(exists=True, dir_okay=False),
)
@click.option(
    "--index-b", "index_b_path", required=True,
    type=click.Path(exists=True, dir_okay=False),
)
@_output_opt
def correlate(index_a_path, index_b_path, output_dir) -> None:
    """Pearson correlation of bio counts between two index dumps."""

    def _do():
        idx_a = _load_index_dump(index_a_path)
        idx_b = _load_index_dump(index_b_path)
        r = count_correlation(idx_a, idx_b)
        union = len(set(idx_a.phrases) | set(idx_b.phrases))
        output_dir.mkdir(parents=True, exist_ok=True)
        manifest = _manifest(
            "correlate", index_a=str(index_a_path), index_b=str(index_b_path),
        )
        _write_tsv(
            output_dir / "correlation.tsv",
            ["n_phrases_union", "pearson_r"],
            [(union, _fmt(r))],
            manifest,
        )
        _write_manifest(output_dir, "correlate", manifest)
        click.echo(f"pearson r = {r:.4f} over {union} phrases")

    _run_guarded(_do)


@main.command()
@_index_opt
@click.option("--top", default=20, show_default=True, help="Top phrases to list.")
@_output_opt
def report(index_path, top, output_dir) -> None:
    """Descriptive statistics for an index dump."""

    def _do():
        idx = _load_index_dump(index_path)
        output_dir.mkdir(parents=True, exist_ok=True)
        manifest = _manifest("report", index=str(index_path), top=top)
        by_tokens = {1: 0, 2: 0, 3: 0}
        longer = 0
        over_10 = 0
        total_memberships = 0
        for stats in idx.phrases.values():
            if stats.token_count in by_tokens:
                by_tokens[stats.token_count] += 1
            else:
                longer += 1
            if stats.bio_count > 10:
                over_10 += 1
            total_memberships += stats.bio_count
        summary = [
            ("n_phrases", len(idx)),
            ("n_unigrams", by_tokens[1]),
            ("n_bigrams", by_tokens[2]),
            ("n_trigrams", by_tokens[3]),
            ("n_longer", longer),
            ("n_over_10_bios", over_10),
            ("total_phrase_user_pairs", total_memberships),
        ]
        _write_tsv(output_dir / "report_summary.tsv", ["stat", "value"], summary, manifest)
        ranked = sorted(
            idx.phrases.values(), key=lambda s: (-s.bio_count, s.phrase)
        )[:top]
        _write_tsv(
            output_dir / "report_top_phrases.tsv",
            ["rank", "phrase", "bio_count", "token_count"],
            (
                (pos, s.phrase, s.bio_count, s.token_count)
                for pos, s in enumerate(ranked, start=1)
            ),
            manifest,
        )
        _write_manifest(output_dir, "report", manifest)
        for stat, value in summary:
            click.echo(f"{stat}: {value}")

    _run_guarded(_do)


if __name__ == "__main__":  # pragma: no cover
    main()
