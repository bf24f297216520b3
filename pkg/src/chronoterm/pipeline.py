"""End-to-end pipeline: load, sample, index under both vocabularies, diff,
classify, resolve counterparts, and write reports atomically."""

from __future__ import annotations

import json
import os
import platform
import shutil
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

from . import __version__, drift, reports
from .errors import ConfigurationError, CorpusError, DataError
from .indexer import (
    DEFAULT_RECALL_CAP,
    IndexingResult,
    MatchIndex,
    build_match_index,
    entity_candidates,
    index_candidates,
)
from .rake import ranked_candidates
from .textprep import (
    FULL_TEXT,
    NER,
    Document,
    EntityDocument,
    load_corpus,
    load_entity_dir,
    load_wordlist,
    stratified_sample,
)
from .vocab import Vocabulary, load_vocabulary, normalize_label

WORKERS_ENV = "CHRONOTERM_WORKERS"

DEFAULT_STRATA_SIZES = (40, 40, 10)


@dataclass(frozen=True)
class PipelineConfig:
    vocab_old: Path
    vocab_new: Path
    corpus_manifest: Path
    stopwords: Path
    out_dir: Path
    vocab_new_full: Path | None = None
    entities_dir: Path | None = None
    exclusions: Path | None = None
    recall_cap: int = DEFAULT_RECALL_CAP
    strata_sizes: tuple[int, int, int] = DEFAULT_STRATA_SIZES
    seed: int = 0
    max_distance: int = drift.DEFAULT_MAX_DISTANCE
    fmt: str = "tsv"
    presence: str = drift.AUTHORIZED_ONLY
    workers: int = field(default=1)

    def validate(self) -> None:
        if self.recall_cap < 1:
            raise ConfigurationError("--top-k must be at least 1")
        if any(n < 0 for n in self.strata_sizes):
            raise ConfigurationError("--strata sizes must be non-negative")
        if self.max_distance < 0:
            raise ConfigurationError("--max-distance must be non-negative")
        if self.fmt not in reports.FORMATS:
            raise ConfigurationError(f"--format must be one of {', '.join(reports.FORMATS)}")
        if self.presence not in drift.PRESENCE_MODES:
            raise ConfigurationError(
                f"--presence must be one of {', '.join(drift.PRESENCE_MODES)}"
            )
        if self.workers < 1:
            raise ConfigurationError(f"{WORKERS_ENV} must be at least 1")
        required = {
            "--vocab-old": self.vocab_old,
            "--vocab-new": self.vocab_new,
            "--corpus-manifest": self.corpus_manifest,
            "--stopwords": self.stopwords,
        }
        optional = {
            "--vocab-new-full": self.vocab_new_full,
            "--exclusions": self.exclusions,
        }
        for flag, path in required.items():
            if not Path(path).is_file():
                raise ConfigurationError(f"{flag}: not a readable file: {path}")
        for flag, path in optional.items():
            if path is not None and not Path(path).is_file():
                raise ConfigurationError(f"{flag}: not a readable file: {path}")
        if self.entities_dir is not None and not Path(self.entities_dir).is_dir():
            raise ConfigurationError(f"--entities: not a directory: {self.entities_dir}")


def workers_from_env() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigurationError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from exc
    return value


def _load_vocab_file(path: Path, tag: str | None = None) -> Vocabulary:
    with open(path, "r", encoding="utf-8") as handle:
        return load_vocabulary(handle, tag if tag is not None else Path(path).stem)


@dataclass
class LoadedInputs:
    vocab_old: Vocabulary
    vocab_new: Vocabulary
    vocab_new_full: Vocabulary | None
    stopwords: set[str]
    exclusions: frozenset[str]
    sample: list[Document]
    entity_docs: dict[str, EntityDocument] | None
    warnings: list[str]


def load_inputs(config: PipelineConfig) -> LoadedInputs:
    vocab_old = _load_vocab_file(config.vocab_old)
    vocab_new = _load_vocab_file(config.vocab_new)
    vocab_new_full = (
        _load_vocab_file(config.vocab_new_full) if config.vocab_new_full else None
    )
    with open(config.stopwords, "r", encoding="utf-8") as handle:
        stopwords = load_wordlist(handle)
    if not stopwords:
        raise DataError(f"stopword file is empty: {config.stopwords}")
    exclusions: frozenset[str] = frozenset()
    if config.exclusions:
        with open(config.exclusions, "r", encoding="utf-8") as handle:
            exclusions = frozenset(normalize_label(w) for w in load_wordlist(handle))
    with open(config.corpus_manifest, "r", encoding="utf-8") as handle:
        corpus, warnings = load_corpus(handle, Path(config.corpus_manifest).parent)
    sample = stratified_sample(corpus, config.strata_sizes, config.seed)

    entity_docs = None
    if config.entities_dir is not None:
        entity_docs = load_entity_dir(config.entities_dir)
        missing = sorted(d.doc_id for d in sample if d.doc_id not in entity_docs)
        if missing:
            raise CorpusError(f"entity documents missing for sampled docs: {missing}")
    return LoadedInputs(
        vocab_old, vocab_new, vocab_new_full, stopwords, exclusions, sample,
        entity_docs, warnings,
    )


def _map_ordered(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def run_indexing(
    sample: Sequence[Document],
    entity_docs: Mapping[str, EntityDocument] | None,
    indexes: Sequence[MatchIndex],
    stopwords: set[str],
    recall_cap: int,
    workers: int = 1,
) -> list[list[IndexingResult]]:
    """Index every sampled document under each vocabulary index.

    Candidate extraction runs once per document and feeds every index.
    Output order is fixed by the sample order regardless of worker count:
    per vocabulary, all FullText results then all NER results.
    """

    def job(doc: Document) -> list[IndexingResult]:
        candidates = ranked_candidates(doc.text, stopwords)
        return [
            index_candidates(doc.doc_id, candidates, idx, recall_cap, FULL_TEXT)
            for idx in indexes
        ]

    def entity_job(doc: Document) -> list[IndexingResult]:
        ed = entity_docs[doc.doc_id]  # presence validated at load
        candidates = entity_candidates(ed, stopwords)
        return [
            index_candidates(doc.doc_id, candidates, idx, recall_cap, NER)
            for idx in indexes
        ]

    full_text = _map_ordered(job, list(sample), workers)
    per_vocab: list[list[IndexingResult]] = [[] for _ in indexes]
    for row in full_text:
        for i, result in enumerate(row):
            per_vocab[i].append(result)
    if entity_docs is not None:
        ner = _map_ordered(entity_job, list(sample), workers)
        for row in ner:
            for i, result in enumerate(row):
                per_vocab[i].append(result)
    return per_vocab


@dataclass(frozen=True)
class PipelineOutcome:
    out_dir: Path
    files: tuple[str, ...]
    report: drift.StatsReport
    warnings: tuple[str, ...]


def run_pipeline(config: PipelineConfig) -> PipelineOutcome:
    config.validate()
    inputs = load_inputs(config)
    doc_strata = {d.doc_id: d.stratum for d in inputs.sample}

    old_index = build_match_index(inputs.vocab_old, inputs.stopwords)
    new_index = build_match_index(inputs.vocab_new, inputs.stopwords)
    old_results, new_results = run_indexing(
        inputs.sample,
        inputs.entity_docs,
        [old_index, new_index],
        inputs.stopwords,
        config.recall_cap,
        config.workers,
    )

    exclusive = drift.exclusive_terms(old_results, new_results)
    records = drift.build_drift_records(
        exclusive,
        doc_strata,
        inputs.vocab_new,
        inputs.vocab_new_full,
        inputs.exclusions,
        config.presence,
        config.max_distance,
    )
    report = drift.compute_statistics(
        records,
        old_results,
        doc_strata,
        facet_filter_available=inputs.vocab_new_full is not None,
        new_version_tag=inputs.vocab_new.version_tag,
    )

    payloads = {
        f"stats.{config.fmt}": reports.render_stats_report(report, config.fmt),
        f"drift.{config.fmt}": reports.render_drift_report(records, config.fmt),
        f"hits.{config.fmt}": reports.render_hits_report(
            old_results, new_results, doc_strata, config.fmt
        ),
        "run.json": render_run_metadata(config),
    }
    write_reports(config.out_dir, payloads)
    warnings = list(inputs.warnings)
    warnings += [f"label skipped (stopwords only): {s}" for s in old_index.skipped_labels]
    warnings += [f"label skipped (stopwords only): {s}" for s in new_index.skipped_labels]
    return PipelineOutcome(
        Path(config.out_dir), tuple(sorted(payloads)), report, tuple(warnings)
    )


def render_run_metadata(config: PipelineConfig) -> str:
    # worker count deliberately left out: outputs must not vary with it
    payload = {
        "tool": "chronoterm",
        "version": __version__,
        "python": platform.python_version(),
        "config": {
            "vocab_old": str(config.vocab_old),
            "vocab_new": str(config.vocab_new),
            "vocab_new_full": str(config.vocab_new_full) if config.vocab_new_full else None,
            "corpus_manifest": str(config.corpus_manifest),
            "entities_dir": str(config.entities_dir) if config.entities_dir else None,
            "stopwords": str(config.stopwords),
            "exclusions": str(config.exclusions) if config.exclusions else None,
            "recall_cap": config.recall_cap,
            "strata_sizes": list(config.strata_sizes),
            "seed": config.seed,
            "max_distance": config.max_distance,
            "format": config.fmt,
            "presence": config.presence,
            "out_dir": str(config.out_dir),
        },
    }
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def write_reports(out_dir: Path | str, payloads: Mapping[str, str]) -> None:
    """Stage every file in a temp directory, then rename into place."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=".chronoterm-", dir=out.parent))
    try:
        for name, content in payloads.items():
            (staging / name).write_bytes(content.encode("utf-8"))
        for name in payloads:
            os.replace(staging / name, out / name)
    finally:
        shutil.rmtree(staging, ignore_errors=True)
