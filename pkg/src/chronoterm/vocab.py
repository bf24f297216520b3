"""Controlled-vocabulary model: concepts, label index, exact lookup.

A vocabulary file is UTF-8 JSON-Lines, one concept per line:

    {"id": "...", "prefLabel": "...", "altLabels": ["...", ...], "scopeNote": "..."}

``altLabels`` and ``scopeNote`` are optional. Blank lines and lines starting
with ``#`` are ignored. Every label, once normalized, must be unique across
the whole vocabulary; collisions abort the load.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import IO, Iterable, Mapping

from .errors import VocabularyError

AUTHORIZED = "authorized"
VARIANT = "variant"

_WS_RE = re.compile(r"\s+")


def normalize_label(raw: str) -> str:
    """Canonical form used for every exact-match comparison.

    Unicode NFC, lowercased, interior whitespace collapsed to single spaces,
    stripped. Punctuation (parenthetical qualifiers etc.) is preserved.
    """
    text = unicodedata.normalize("NFC", raw).lower()
    return _WS_RE.sub(" ", text).strip()


@dataclass(frozen=True)
class Concept:
    """One vocabulary entry: an authorized heading plus its variant labels."""

    concept_id: str
    pref_label: str
    variant_labels: tuple[str, ...] = ()
    scope_note: str | None = None


@dataclass(frozen=True)
class LabelMatch:
    """Result of an exact lookup: which concept owns the label, and how."""

    kind: str  # AUTHORIZED or VARIANT
    concept: Concept
    matched_label: str  # original spelling of the label that matched


@dataclass(frozen=True)
class Vocabulary:
    version_tag: str
    concepts: tuple[Concept, ...]  # sorted by concept_id
    label_index: Mapping[str, tuple[str, str, str]] = field(compare=False)
    # normalized label -> (concept_id, kind, original label)

    def __len__(self) -> int:
        return len(self.concepts)

    def get(self, concept_id: str) -> Concept | None:
        lo, hi = 0, len(self.concepts)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.concepts[mid].concept_id < concept_id:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(self.concepts) and self.concepts[lo].concept_id == concept_id:
            return self.concepts[lo]
        return None


def build_vocabulary(version_tag: str, concepts: Iterable[Concept]) -> Vocabulary:
    """Assemble an immutable vocabulary, enforcing label uniqueness."""
    by_id: dict[str, Concept] = {}
    for concept in concepts:
        if not concept.concept_id:
            raise VocabularyError("concept with empty id")
        if not concept.pref_label:
            raise VocabularyError(f"concept {concept.concept_id!r} has an empty prefLabel")
        if concept.concept_id in by_id:
            raise VocabularyError(f"duplicate concept id {concept.concept_id!r}")
        by_id[concept.concept_id] = concept

    index: dict[str, tuple[str, str, str]] = {}

    def claim(label: str, concept: Concept, kind: str) -> None:
        key = normalize_label(label)
        if not key:
            raise VocabularyError(
                f"concept {concept.concept_id!r} has a label that normalizes to empty"
            )
        prior = index.get(key)
        if prior is not None:
            ids = sorted({prior[0], concept.concept_id})
            raise VocabularyError(
                f"label {key!r} appears more than once (concepts {ids[0]!r} and {ids[1]!r})"
            )
        index[key] = (concept.concept_id, kind, label)

    ordered = tuple(sorted(by_id.values(), key=lambda c: c.concept_id))
    for concept in ordered:
        claim(concept.pref_label, concept, AUTHORIZED)
        for variant in concept.variant_labels:
            claim(variant, concept, VARIANT)
    return Vocabulary(version_tag, ordered, MappingProxyType(index))


def load_vocabulary(source: IO[bytes] | IO[str], version_tag: str) -> Vocabulary:
    """Parse a JSON-Lines vocabulary stream into a Vocabulary."""
    concepts: list[Concept] = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise VocabularyError(f"line {lineno}: malformed JSON ({exc.msg})") from exc
        if not isinstance(obj, dict):
            raise VocabularyError(f"line {lineno}: expected a JSON object")
        try:
            concept_id = obj["id"]
            pref = obj["prefLabel"]
        except KeyError as exc:
            raise VocabularyError(f"line {lineno}: missing field {exc.args[0]!r}") from exc
        alts = obj.get("altLabels", [])
        if not isinstance(concept_id, str) or not isinstance(pref, str):
            raise VocabularyError(f"line {lineno}: id and prefLabel must be strings")
        if not isinstance(alts, list) or not all(isinstance(a, str) for a in alts):
            raise VocabularyError(f"line {lineno}: altLabels must be a list of strings")
        note = obj.get("scopeNote")
        if note is not None and not isinstance(note, str):
            raise VocabularyError(f"line {lineno}: scopeNote must be a string")
        for alt in alts:
            if normalize_label(alt) == normalize_label(pref):
                raise VocabularyError(
                    f"line {lineno}: variant {alt!r} duplicates the authorized label"
                )
        concepts.append(Concept(concept_id, pref, tuple(alts), note))
    return build_vocabulary(version_tag, concepts)


def dump_vocabulary(vocab: Vocabulary) -> str:
    """Serialize back to JSON-Lines (concepts in id order)."""
    lines = []
    for concept in vocab.concepts:
        obj: dict[str, object] = {
            "id": concept.concept_id,
            "prefLabel": concept.pref_label,
            "altLabels": list(concept.variant_labels),
        }
        if concept.scope_note is not None:
            obj["scopeNote"] = concept.scope_note
        lines.append(json.dumps(obj, ensure_ascii=False, sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")


def lookup_exact(vocab: Vocabulary, label: str) -> LabelMatch | None:
    """Exact lookup of a label against both authorized and variant forms."""
    entry = vocab.label_index.get(normalize_label(label))
    if entry is None:
        return None
    concept_id, kind, original = entry
    concept = vocab.get(concept_id)
    assert concept is not None
    return LabelMatch(kind, concept, original)
