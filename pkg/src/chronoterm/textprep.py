"""Corpus ingestion: tokenization, stemming, strata, sampling, entity files."""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

from . import porter
from .errors import CorpusError, SamplingError

SHORT = "Short"
MEDIUM = "Medium"
LONG = "Long"
STRATA = (SHORT, MEDIUM, LONG)

MIN_WORDS = 100
SHORT_MAX = 2_000
MEDIUM_MAX = 99_999  # the Short/Medium/Long bands must tile [100, inf)

FULL_TEXT = "FullText"
NER = "NER"

ENTITY_TYPES = frozenset(
    {"NORP", "PERSON", "DATE", "LANGUAGE", "WORK_OF_ART", "EVENT", "LAW", "PRODUCT", "ORG", "FAC"}
)

# Word tokens: alphanumeric runs, hyphens/apostrophes only word-internally.
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’-][^\W_]+)*")

MANIFEST_COLUMNS = ("doc_id", "path", "edition")


def tokenize(text: str) -> list[str]:
    """Split text into word tokens, preserving original casing."""
    return _TOKEN_RE.findall(text)


def stem(token: str) -> str:
    """Lowercased Porter stem of a single word token."""
    return porter.stem(token)


def classify_stratum(word_count: int) -> str:
    if word_count < MIN_WORDS:
        raise CorpusError(f"word count {word_count} is below the corpus minimum of {MIN_WORDS}")
    if word_count <= SHORT_MAX:
        return SHORT
    if word_count <= MEDIUM_MAX:
        return MEDIUM
    return LONG


@dataclass(frozen=True)
class Document:
    doc_id: str
    text: str
    word_count: int
    stratum: str
    edition: str | None = None


@dataclass(frozen=True)
class EntityDocument:
    doc_id: str
    entities: tuple[tuple[str, str], ...]  # (surface, type tag), file order kept


def make_document(doc_id: str, text: str, edition: str | None = None) -> Document:
    count = len(tokenize(text))
    return Document(doc_id, text, count, classify_stratum(count), edition)


def load_corpus(
    manifest: IO[str], base_dir: Path | str = "."
) -> tuple[list[Document], list[str]]:
    """Read a TSV manifest and its text files.

    Returns the documents in manifest order plus warning lines for entries
    skipped because they fall below the corpus word-count minimum. Relative
    paths are resolved against ``base_dir``.
    """
    base = Path(base_dir)
    header = manifest.readline()
    if tuple(header.rstrip("\n").rstrip("\r").split("\t")) != MANIFEST_COLUMNS:
        raise CorpusError("manifest header must be 'doc_id\\tpath\\tedition'")
    documents: list[Document] = []
    warnings: list[str] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(manifest, start=2):
        line = raw.rstrip("\n").rstrip("\r")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise CorpusError(f"manifest line {lineno}: expected 3 tab-separated columns")
        doc_id, rel_path, edition = parts
        if not doc_id:
            raise CorpusError(f"manifest line {lineno}: empty doc_id")
        if doc_id in seen:
            raise CorpusError(f"duplicate doc_id {doc_id!r} in manifest")
        seen.add(doc_id)
        path = base / rel_path
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError as exc:
            raise CorpusError(f"text file for {doc_id!r} not found: {path}") from exc
        except (OSError, UnicodeDecodeError) as exc:
            raise CorpusError(f"text file for {doc_id!r} unreadable: {path} ({exc})") from exc
        count = len(tokenize(text))
        if count < MIN_WORDS:
            warnings.append(
                f"skipped {doc_id!r}: word count {count} below corpus minimum {MIN_WORDS}"
            )
            continue
        documents.append(Document(doc_id, text, count, classify_stratum(count), edition or None))
    return documents, warnings


def stratified_sample(
    corpus: Sequence[Document], sizes: tuple[int, int, int], seed: int
) -> list[Document]:
    """Uniform per-stratum sample without replacement, deterministic in seed.

    Strata are drawn in Short, Medium, Long order from doc_id-sorted pools;
    the output is ordered the same way, sorted by doc_id within each stratum.
    """
    rng = random.Random(seed)
    sample: list[Document] = []
    for stratum, wanted in zip(STRATA, sizes):
        pool = sorted((d for d in corpus if d.stratum == stratum), key=lambda d: d.doc_id)
        if wanted > len(pool):
            raise SamplingError(
                f"stratum {stratum} has {len(pool)} documents, {wanted} requested"
            )
        chosen = rng.sample(pool, wanted) if wanted else []
        sample.extend(sorted(chosen, key=lambda d: d.doc_id))
    return sample


def parse_entity_line(line: str, lineno: int = 1) -> EntityDocument:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"entity line {lineno}: malformed JSON ({exc.msg})") from exc
    if not isinstance(obj, dict) or not isinstance(obj.get("doc_id"), str):
        raise CorpusError(f"entity line {lineno}: expected an object with a doc_id string")
    raw_entities = obj.get("entities", [])
    if not isinstance(raw_entities, list):
        raise CorpusError(f"entity line {lineno}: entities must be a list")
    entities: list[tuple[str, str]] = []
    for item in raw_entities:
        if not isinstance(item, dict):
            raise CorpusError(f"entity line {lineno}: each entity must be an object")
        surface = item.get("text")
        tag = item.get("type")
        if not isinstance(surface, str) or not surface:
            raise CorpusError(f"entity line {lineno}: entity text must be a non-empty string")
        if tag not in ENTITY_TYPES:
            raise CorpusError(f"entity line {lineno}: unknown entity type {tag!r}")
        entities.append((surface, tag))
    return EntityDocument(obj["doc_id"], tuple(entities))


def load_entity_documents(source: IO[str]) -> list[EntityDocument]:
    """Read a JSON-Lines entity file: one entity document per line."""
    docs = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line:
            continue
        docs.append(parse_entity_line(line, lineno))
    return docs


def load_entity_document(source: IO[str]) -> EntityDocument:
    """Read an entity file expected to hold exactly one entity document."""
    docs = load_entity_documents(source)
    if len(docs) != 1:
        raise CorpusError(f"expected exactly one entity document, found {len(docs)}")
    return docs[0]


def load_entity_dir(directory: Path | str) -> dict[str, EntityDocument]:
    """Load every entity file under a directory, keyed by doc_id."""
    out: dict[str, EntityDocument] = {}
    root = Path(directory)
    if not root.is_dir():
        raise CorpusError(f"entity directory not found: {root}")
    for path in sorted(p for p in root.iterdir() if p.is_file()):
        with path.open(encoding="utf-8") as handle:
            for doc in load_entity_documents(handle):
                if doc.doc_id in out:
                    raise CorpusError(f"duplicate entity doc_id {doc.doc_id!r} ({path})")
                out[doc.doc_id] = doc
    return out


def load_wordlist(source: Iterable[str]) -> set[str]:
    """One word per line, '#' comments and blank lines ignored, lowercased."""
    words = set()
    for raw in source:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        words.add(line.lower())
    return words
