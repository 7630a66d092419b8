"""Command-line front end: ingest -> style reports -> train/load vectors -> WEAT.

Exit codes: 0 success, 1 environment/I/O failure, 2 data-quality failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys

from lyricstats import __version__
from lyricstats.corpus import (
    IngestConfig,
    IngestError,
    TokenizeConfig,
    ingest,
    load_cache,
    save_cache,
    write_reject_report,
)
from lyricstats.embeddings import EmbeddingError, SgnsConfig, load_vectors, save_vectors, train_sgns
from lyricstats.resources import default_battery_path, default_stopwords_path, default_swear_lexicon_path
from lyricstats.style import (
    aggregate,
    corpus_style_metrics,
    load_swear_lexicon,
    load_wordlist,
    rank_series,
    top_words,
)
from lyricstats.weat import OovPolicy, WeatError, load_battery, run_battery, write_results_csv

EXIT_OK = 0
EXIT_IO = 1
EXIT_QUALITY = 2


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.9f}"
    return str(value)


def _write_config_digest(out_dir: str, command: str, options: dict) -> None:
    resolved = json.dumps({"command": command, **options}, sort_keys=True)
    digest = hashlib.sha256(resolved.encode()).hexdigest()
    with open(os.path.join(out_dir, f"{command}.config.json"), "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"digest": digest, "options": json.loads(resolved)}, indent=2, sort_keys=True) + "\n")


def _load_config_defaults(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def cmd_ingest(args) -> int:
    fmt = args.format or ("csv" if args.input.endswith(".csv") else "jsonl")
    config = IngestConfig(max_reject_fraction=args.max_reject_fraction)
    tok_config = TokenizeConfig(drop_annotations=not args.keep_annotations)
    try:
        result = ingest(args.input, format=fmt, config=config, tokenize_config=tok_config)
    except (IngestError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    os.makedirs(args.out, exist_ok=True)
    save_cache(result, os.path.join(args.out, "corpus.cache"))
    write_reject_report(result.rejects, os.path.join(args.out, "rejects.jsonl"))
    _write_config_digest(
        args.out,
        "ingest",
        {
            "input": args.input,
            "format": fmt,
            "max_reject_fraction": args.max_reject_fraction,
            "keep_annotations": args.keep_annotations,
        },
    )
    print(f"ingested {len(result.corpus)} songs, {len(result.rejects)} rejects")
    if not result.quality_ok:
        print("error: reject fraction over threshold", file=sys.stderr)
        return EXIT_QUALITY
    return EXIT_OK


def cmd_style(args) -> int:
    try:
        corpus = load_cache(args.cache)
        lexicon = load_swear_lexicon(args.lexicon or default_swear_lexicon_path())
        stopwords = load_wordlist(args.stopwords or default_stopwords_path())
    except (IngestError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    os.makedirs(args.out, exist_ok=True)
    metrics = corpus_style_metrics(corpus, lexicon)

    with open(os.path.join(args.out, "per_song.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "song_id",
                "year",
                "cohort",
                "length_words",
                "duration_seconds",
                "speed_wps",
                "repetitiveness_pct",
                "fk_grade",
                "swear_count",
                "swear_rate",
            ]
        )
        for rec, m in zip(corpus.records, metrics):
            writer.writerow(
                [
                    m.song_id,
                    rec.year,
                    rec.cohort,
                    m.length_words,
                    _fmt(m.duration_seconds),
                    _fmt(m.speed_wps),
                    _fmt(m.repetitiveness_pct),
                    _fmt(m.fk_grade),
                    m.swear_count,
                    _fmt(m.swear_rate),
                ]
            )

    with open(os.path.join(args.out, "aggregate.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "year",
                "cohort",
                "song_count",
                "mean_length_words",
                "mean_duration_seconds",
                "duration_coverage",
                "mean_speed_wps",
                "mean_repetitiveness_pct",
                "mean_fk_grade",
                "mean_swear_count",
                "mean_swear_rate",
            ]
        )
        for agg in aggregate(corpus, metrics):
            writer.writerow(
                [
                    agg.year,
                    agg.cohort,
                    agg.song_count,
                    _fmt(agg.mean_length_words),
                    _fmt(agg.mean_duration_seconds),
                    agg.duration_coverage,
                    _fmt(agg.mean_speed_wps),
                    _fmt(agg.mean_repetitiveness_pct),
                    _fmt(agg.mean_fk_grade),
                    _fmt(agg.mean_swear_count),
                    _fmt(agg.mean_swear_rate),
                ]
            )

    years = sorted({r.year for r in corpus.records if args.cohort is None or r.cohort == args.cohort})
    with open(os.path.join(args.out, "top_words.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["year", "rank", "word"])
        target_years = [args.year] if args.year is not None else years
        for year in target_years:
            try:
                tops = top_words(corpus, year, args.cohort, args.top_k, stopwords)
            except Exception:
                continue
            for rank, word in enumerate(tops, start=1):
                writer.writerow([year, rank, word])

    with open(os.path.join(args.out, "rank_series.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["word", "year", "rank"])
        if args.words:
            words = [w.strip() for w in args.words.split(",") if w.strip()]
            for series in rank_series(corpus, words, cohort=args.cohort):
                for year in sorted(series.entries):
                    writer.writerow([series.word, year, series.entries[year]])

    _write_config_digest(
        args.out,
        "style",
        {
            "cache": args.cache,
            "lexicon": args.lexicon,
            "stopwords": args.stopwords,
            "words": args.words,
            "top_k": args.top_k,
            "year": args.year,
            "cohort": args.cohort,
        },
    )
    return EXIT_OK


def cmd_train(args) -> int:
    if args.seed is None:
        print("error: --seed is mandatory for training (stochastic step)", file=sys.stderr)
        return EXIT_IO
    try:
        corpus = load_cache(args.cache)
    except (IngestError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    config = SgnsConfig(
        dim=args.dim,
        window=args.window,
        negatives=args.negatives,
        epochs=args.epochs,
        initial_learning_rate=args.learning_rate,
        min_count=args.min_count,
        subsample_threshold=args.subsample,
        seed=args.seed,
    )
    try:
        table = train_sgns(corpus, config, parallel=not args.deterministic, workers=args.workers)
    except EmbeddingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUALITY
    out_dir = os.path.dirname(os.path.abspath(args.out))
    os.makedirs(out_dir, exist_ok=True)
    save_vectors(table, args.out)
    _write_config_digest(
        out_dir,
        "train",
        {
            "cache": args.cache,
            "out": args.out,
            "dim": args.dim,
            "window": args.window,
            "negatives": args.negatives,
            "epochs": args.epochs,
            "learning_rate": args.learning_rate,
            "min_count": args.min_count,
            "subsample": args.subsample,
            "seed": args.seed,
            "deterministic": args.deterministic,
        },
    )
    print(f"trained {len(table)} vectors of dim {table.dim} -> {args.out}")
    return EXIT_OK


def _print_summary(results) -> None:
    print(f"{'test':<55} {'effect':>8} {'p':>10}  method")
    for r in results:
        if r.error:
            print(f"{r.test_name:<55} {'-':>8} {'-':>10}  error: {r.error}")
        else:
            print(f"{r.test_name:<55} {r.effect_size:>8.3f} {r.p_value:>10.4g}  {r.p_method}")


def cmd_weat(args) -> int:
    try:
        table = load_vectors(args.vectors)
        tests = load_battery(args.tests or default_battery_path())
    except (EmbeddingError, WeatError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    results = run_battery(
        tests,
        table,
        policy=OovPolicy(),
        p_mode="exact" if args.exact else "monte_carlo",
        n_samples=args.mc_samples,
        seed=args.seed,
        inclusive=args.inclusive,
    )
    os.makedirs(args.out, exist_ok=True)
    write_results_csv(results, os.path.join(args.out, "weat_results.csv"))
    _write_config_digest(
        args.out,
        "weat",
        {
            "vectors": args.vectors,
            "tests": args.tests,
            "exact": args.exact,
            "mc_samples": args.mc_samples,
            "seed": args.seed,
            "inclusive": args.inclusive,
        },
    )
    _print_summary(results)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lyricstats", description=__doc__)
    parser.add_argument("--config", help="JSON config file; flags override its values")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="read a song dataset and write the tokenized corpus cache")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["jsonl", "csv"])
    p.add_argument("--out", required=True)
    p.add_argument("--max-reject-fraction", type=float, default=0.5)
    p.add_argument("--keep-annotations", action="store_true")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("style", help="write per-song, aggregate, top-words, and rank-series CSVs")
    p.add_argument("--cache", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--lexicon")
    p.add_argument("--stopwords")
    p.add_argument("--words", help="comma-separated words for the rank series")
    p.add_argument("--top-k", type=int, default=100)
    p.add_argument("--year", type=int)
    p.add_argument("--cohort", choices=["popular", "other"])
    p.set_defaults(func=cmd_style)

    p = sub.add_parser("train", help="train skip-gram negative-sampling vectors on the cache")
    p.add_argument("--cache", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dim", type=int, default=100)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--negatives", type=int, default=5)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--learning-rate", type=float, default=0.025)
    p.add_argument("--min-count", type=int, default=5)
    p.add_argument("--subsample", type=float, default=1e-3)
    p.add_argument("--seed", type=int)
    p.add_argument("--deterministic", action="store_true")
    p.add_argument("--workers", type=int, default=4)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("weat", help="run the WEAT battery against a vector file")
    p.add_argument("--vectors", required=True)
    p.add_argument("--tests")
    p.add_argument("--out", required=True)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--mc-samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inclusive", action="store_true")
    p.set_defaults(func=cmd_weat)

    p = sub.add_parser("version", help="print the package version")
    p.set_defaults(func=lambda args: print(__version__) or EXIT_OK)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    raw_argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(raw_argv)
    if args.config:
        # config supplies defaults; flags given on the command line win
        passed = {
            tok[2:].split("=", 1)[0].replace("-", "_") for tok in raw_argv if tok.startswith("--")
        }
        for key, value in _load_config_defaults(args.config).items():
            attr = key.replace("-", "_")
            if hasattr(args, attr) and attr not in passed:
                setattr(args, attr, value)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
