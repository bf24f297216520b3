"""Command-line interface.

    chronoterm run    full pipeline: index, diff, classify, stats
    chronoterm index  indexing only, writes the hits report
    chronoterm diff   re-classify an existing hits report, writes drift
    chronoterm stats  recompute statistics from hits + drift reports

Exit codes: 0 success, 2 configuration/validation error, 3 data error.
Errors are reported as a single JSON line on stderr. The CHRONOTERM_WORKERS
environment variable caps indexing parallelism; outputs do not depend on it.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import drift, pipeline, reports
from .errors import ConfigurationError, DataError
from .indexer import build_match_index
from .textprep import load_wordlist
from .vocab import load_vocabulary, normalize_label


def _add_io_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", required=True, metavar="DIR", help="output directory")
    parser.add_argument(
        "--format",
        default="tsv",
        choices=reports.FORMATS,
        help="report format (default: tsv)",
    )


def _add_pipeline_flags(parser: argparse.ArgumentParser, with_diff: bool) -> None:
    parser.add_argument("--vocab-old", required=True, metavar="PATH",
                        help="historical vocabulary (JSON-Lines)")
    parser.add_argument("--vocab-new", required=True, metavar="PATH",
                        help="contemporary vocabulary (JSON-Lines)")
    parser.add_argument("--corpus-manifest", required=True, metavar="PATH",
                        help="TSV manifest: doc_id, path, edition")
    parser.add_argument("--stopwords", required=True, metavar="PATH")
    parser.add_argument("--entities", metavar="DIR",
                        help="directory of entity files; enables the NER approach")
    parser.add_argument("--top-k", type=int, default=pipeline.DEFAULT_RECALL_CAP,
                        metavar="INT", help="recall cap per document per vocabulary")
    parser.add_argument("--strata", default="40,40,10", metavar="S,M,L",
                        help="sample sizes per stratum (default: 40,40,10)")
    parser.add_argument("--seed", type=int, default=0, metavar="INT")
    if with_diff:
        _add_diff_flags(parser)


def _add_diff_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--vocab-new-full", metavar="PATH",
                        help="full contemporary vocabulary for facet-exclusion checks")
    parser.add_argument("--exclusions", metavar="PATH",
                        help="terms to flag as data errors, one per line")
    parser.add_argument("--max-distance", type=int, default=drift.DEFAULT_MAX_DISTANCE,
                        metavar="INT", help="edit-distance cap for probable counterparts")
    parser.add_argument("--presence", default=drift.AUTHORIZED_ONLY,
                        choices=drift.PRESENCE_MODES,
                        help="what counts as surviving in the contemporary vocabulary: "
                             "authorized headings only, or any label (default: authorized)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chronoterm",
        description="Diff automatic subject indexing output across two vocabulary versions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="full pipeline")
    _add_pipeline_flags(run, with_diff=True)
    _add_io_flags(run)

    index = sub.add_parser("index", help="index the corpus, write hits report")
    _add_pipeline_flags(index, with_diff=False)
    _add_io_flags(index)

    diff_cmd = sub.add_parser("diff", help="classify an existing hits report")
    diff_cmd.add_argument("--hits", required=True, metavar="PATH",
                          help="hits report from 'index' (tsv or json)")
    diff_cmd.add_argument("--vocab-new", required=True, metavar="PATH")
    _add_diff_flags(diff_cmd)
    _add_io_flags(diff_cmd)

    stats = sub.add_parser("stats", help="statistics from hits + drift reports")
    stats.add_argument("--hits", required=True, metavar="PATH")
    stats.add_argument("--drift", required=True, metavar="PATH")
    _add_io_flags(stats)
    return parser


def _parse_strata(raw: str) -> tuple[int, int, int]:
    parts = raw.split(",")
    if len(parts) != 3:
        raise ConfigurationError("--strata expects three comma-separated sizes, e.g. 40,40,10")
    try:
        sizes = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise ConfigurationError(f"--strata sizes must be integers: {raw!r}") from exc
    return sizes  # type: ignore[return-value]


def _config_from_args(args: argparse.Namespace, with_diff: bool) -> pipeline.PipelineConfig:
    return pipeline.PipelineConfig(
        vocab_old=Path(args.vocab_old),
        vocab_new=Path(args.vocab_new),
        corpus_manifest=Path(args.corpus_manifest),
        stopwords=Path(args.stopwords),
        out_dir=Path(args.out),
        vocab_new_full=Path(args.vocab_new_full) if with_diff and args.vocab_new_full else None,
        entities_dir=Path(args.entities) if args.entities else None,
        exclusions=Path(args.exclusions) if with_diff and args.exclusions else None,
        recall_cap=args.top_k,
        strata_sizes=_parse_strata(args.strata),
        seed=args.seed,
        max_distance=args.max_distance if with_diff else drift.DEFAULT_MAX_DISTANCE,
        fmt=args.format,
        presence=args.presence if with_diff else drift.AUTHORIZED_ONLY,
        workers=pipeline.workers_from_env(),
    )


def _read_report(path_str: str, what: str) -> tuple[str, str]:
    path = Path(path_str)
    fmt = path.suffix.lstrip(".")
    if fmt not in ("tsv", "json"):
        raise ConfigurationError(f"--{what}: expected a .tsv or .json file: {path}")
    if not path.is_file():
        raise ConfigurationError(f"--{what}: not a readable file: {path}")
    return path.read_text(encoding="utf-8"), fmt


def _cmd_run(args: argparse.Namespace) -> int:
    outcome = pipeline.run_pipeline(_config_from_args(args, with_diff=True))
    for line in outcome.warnings:
        print(f"warning: {line}", file=sys.stderr)
    return 0


def _cmd_index(args: argparse.Namespace) -> int:
    config = _config_from_args(args, with_diff=False)
    config.validate()
    inputs = pipeline.load_inputs(config)
    doc_strata = {d.doc_id: d.stratum for d in inputs.sample}
    old_index = build_match_index(inputs.vocab_old, inputs.stopwords)
    new_index = build_match_index(inputs.vocab_new, inputs.stopwords)
    old_results, new_results = pipeline.run_indexing(
        inputs.sample, inputs.entity_docs, [old_index, new_index],
        inputs.stopwords, config.recall_cap, config.workers,
    )
    payloads = {
        f"hits.{config.fmt}": reports.render_hits_report(
            old_results, new_results, doc_strata, config.fmt
        ),
        "run.json": pipeline.render_run_metadata(config),
    }
    pipeline.write_reports(config.out_dir, payloads)
    for line in inputs.warnings:
        print(f"warning: {line}", file=sys.stderr)
    return 0


def _cmd_diff(args: argparse.Namespace) -> int:
    text, fmt_in = _read_report(args.hits, "hits")
    vocab_new_path = Path(args.vocab_new)
    if not vocab_new_path.is_file():
        raise ConfigurationError(f"--vocab-new: not a readable file: {vocab_new_path}")
    old_results, new_results, doc_strata = reports.parse_hits_report(text, fmt_in)
    with open(vocab_new_path, "r", encoding="utf-8") as handle:
        vocab_new = load_vocabulary(handle, vocab_new_path.stem)
    vocab_new_full = None
    if args.vocab_new_full:
        full_path = Path(args.vocab_new_full)
        if not full_path.is_file():
            raise ConfigurationError(f"--vocab-new-full: not a readable file: {full_path}")
        with open(full_path, "r", encoding="utf-8") as handle:
            vocab_new_full = load_vocabulary(handle, full_path.stem)
    exclusions: frozenset[str] = frozenset()
    if args.exclusions:
        excl_path = Path(args.exclusions)
        if not excl_path.is_file():
            raise ConfigurationError(f"--exclusions: not a readable file: {excl_path}")
        with open(excl_path, "r", encoding="utf-8") as handle:
            exclusions = frozenset(normalize_label(w) for w in load_wordlist(handle))
    exclusive = drift.exclusive_terms(old_results, new_results)
    records = drift.build_drift_records(
        exclusive, doc_strata, vocab_new, vocab_new_full,
        exclusions, args.presence, args.max_distance,
    )
    pipeline.write_reports(
        args.out, {f"drift.{args.format}": reports.render_drift_report(records, args.format)}
    )
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    hits_text, hits_fmt = _read_report(args.hits, "hits")
    drift_text, drift_fmt = _read_report(args.drift, "drift")
    old_results, new_results, doc_strata = reports.parse_hits_report(hits_text, hits_fmt)
    records = reports.parse_drift_report(drift_text, drift_fmt)
    new_tag = new_results[0].version_tag if new_results else ""
    # the drift file does not say whether a full vocabulary was consulted,
    # so the standalone stats command never prints the facet-filter banner
    report = drift.compute_statistics(
        records, old_results, doc_strata,
        facet_filter_available=True,
        new_version_tag=new_tag,
    )
    pipeline.write_reports(
        args.out, {f"stats.{args.format}": reports.render_stats_report(report, args.format)}
    )
    return 0


_COMMANDS = {"run": _cmd_run, "index": _cmd_index, "diff": _cmd_diff, "stats": _cmd_stats}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigurationError as exc:
        print(json.dumps({"error": "validation", "message": str(exc)}), file=sys.stderr)
        return 2
    except DataError as exc:
        print(json.dumps({"error": "data", "message": str(exc)}), file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
