"""Diff indexing output across vocabulary versions and classify what dropped.

A historical hit is *exclusive* when no hit for the same document under the
contemporary vocabulary resolves to a concept whose authorized label equals
the historical term. Exclusive terms are then classified:

    DataError       the term is on the exclusion list
    PresentInNew    the term still exists in the contemporary vocabulary
    FacetExclusion  absent from the contemporary vocabulary but present in
                    the full (unfaceted) contemporary vocabulary
    Drift           gone from both

Existence has two readings, selected by ``presence``: AUTHORIZED_ONLY counts
only authorized headings (a term demoted to a variant label has still been
deprecated, and its new concept is reported as a verified counterpart);
ANY_LABEL counts variant labels as survival. For variant-kind terms, Drift
additionally requires that the term's historical authorized form fails the
same lookups.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

from . import levenshtein
from .errors import DataError
from .indexer import Hit, IndexingResult
from .textprep import FULL_TEXT, NER, STRATA, Document
from .vocab import AUTHORIZED, VARIANT, Vocabulary, lookup_exact, normalize_label

PRESENT_IN_NEW = "PresentInNew"
DRIFT = "Drift"
FACET_EXCLUSION = "FacetExclusion"
DATA_ERROR = "DataError"

VERIFIED = "verified"
PROBABLE = "probable"

AUTHORIZED_ONLY = "authorized"
ANY_LABEL = "any"
PRESENCE_MODES = (AUTHORIZED_ONLY, ANY_LABEL)

DEFAULT_MAX_DISTANCE = 2

APPROACHES = (FULL_TEXT, NER)


@dataclass(frozen=True)
class ExclusiveTerm:
    doc_id: str
    approach: str
    hit: Hit


@dataclass(frozen=True)
class Counterpart:
    concept_id: str
    label: str  # authorized label of the counterpart concept
    status: str  # verified | probable
    distance: int


@dataclass(frozen=True)
class DriftRecord:
    doc_id: str
    approach: str
    stratum: str
    term: str  # matched label from the historical result
    label_kind: str  # authorized | variant
    authorized_form: str  # historical concept's authorized label
    concept_id: str  # historical concept id
    classification: str
    counterpart: Counterpart | None = None


def exclusive_terms(
    old_results: Sequence[IndexingResult], new_results: Sequence[IndexingResult]
) -> list[ExclusiveTerm]:
    """Hits whose term does not survive into the contemporary output.

    Comparison is per (document, approach). The historical side contributes
    the matched label of each hit; the contemporary side contributes the
    authorized label of each concept it returned, since that is the term an
    indexer reports when a variant label matches.
    """
    old_pairs = {(r.doc_id, r.approach) for r in old_results}
    new_pairs = {(r.doc_id, r.approach) for r in new_results}
    if old_pairs != new_pairs:
        missing = sorted(old_pairs ^ new_pairs)
        raise DataError(f"result sets cover different documents: {missing}")

    new_terms: dict[tuple[str, str], set[str]] = {}
    for result in new_results:
        key = (result.doc_id, result.approach)
        new_terms.setdefault(key, set()).update(
            normalize_label(h.pref_label) for h in result.hits
        )

    exclusive: list[ExclusiveTerm] = []
    for result in old_results:
        present = new_terms[(result.doc_id, result.approach)]
        for hit in result.hits:
            if normalize_label(hit.matched_label) not in present:
                exclusive.append(ExclusiveTerm(result.doc_id, result.approach, hit))
    return exclusive


def _exists(vocab: Vocabulary, term: str, presence: str) -> bool:
    match = lookup_exact(vocab, term)
    if match is None:
        return False
    if presence == ANY_LABEL:
        return True
    return match.kind == AUTHORIZED


def classify(
    term: str,
    label_kind: str,
    authorized_form: str,
    new_vocab: Vocabulary,
    new_full_vocab: Vocabulary | None = None,
    exclusions: frozenset[str] | set[str] = frozenset(),
    presence: str = AUTHORIZED_ONLY,
) -> str:
    """Classify one exclusive historical term."""
    if presence not in PRESENCE_MODES:
        raise ValueError(f"unknown presence mode {presence!r}")
    if normalize_label(term) in exclusions:
        return DATA_ERROR
    if _exists(new_vocab, term, presence):
        return PRESENT_IN_NEW
    if new_full_vocab is not None and _exists(new_full_vocab, term, presence):
        return FACET_EXCLUSION
    if label_kind == VARIANT:
        if _exists(new_vocab, authorized_form, presence):
            return PRESENT_IN_NEW
        if new_full_vocab is not None and _exists(new_full_vocab, authorized_form, presence):
            return FACET_EXCLUSION
    return DRIFT


def resolve_counterpart(
    term: str, new_vocab: Vocabulary, max_distance: int = DEFAULT_MAX_DISTANCE
) -> Counterpart | None:
    """Find the contemporary concept that likely replaced a drifted term.

    A concept holding the normalized term among its variant labels is a
    verified counterpart. Otherwise the nearest label by edit distance wins,
    if within max_distance; ties prefer authorized labels, then the smaller
    label. Such matches are only probable.
    """
    needle = normalize_label(term)
    match = lookup_exact(new_vocab, needle)
    if match is not None and match.kind == VARIANT:
        return Counterpart(match.concept.concept_id, match.concept.pref_label, VERIFIED, 0)

    best: tuple[int, int, str, str] | None = None  # (distance, kind rank, label, id)
    for concept in new_vocab.concepts:
        labels = [(concept.pref_label, 0)] + [(v, 1) for v in concept.variant_labels]
        for label, kind_rank in labels:
            dist = levenshtein.distance(needle, normalize_label(label))
            if dist == 0 or dist > max_distance:
                # distance 0 only happens when the term is itself a label; a
                # variant was already returned verified and an authorized
                # label means the term never drifted
                continue
            key = (dist, kind_rank, normalize_label(label), concept.concept_id)
            if best is None or key < best:
                best = key
    if best is None:
        return None
    concept = new_vocab.get(best[3])
    assert concept is not None
    return Counterpart(concept.concept_id, concept.pref_label, PROBABLE, best[0])


def build_drift_records(
    exclusive: Sequence[ExclusiveTerm],
    doc_strata: Mapping[str, str],
    new_vocab: Vocabulary,
    new_full_vocab: Vocabulary | None = None,
    exclusions: frozenset[str] | set[str] = frozenset(),
    presence: str = AUTHORIZED_ONLY,
    max_distance: int = DEFAULT_MAX_DISTANCE,
) -> list[DriftRecord]:
    """Classify every exclusive term and resolve counterparts for Drift."""
    records = []
    for item in exclusive:
        if item.doc_id not in doc_strata:
            raise DataError(f"no stratum known for document {item.doc_id!r}")
        hit = item.hit
        classification = classify(
            hit.matched_label,
            hit.label_kind,
            hit.pref_label,
            new_vocab,
            new_full_vocab,
            exclusions,
            presence,
        )
        counterpart = None
        if classification == DRIFT:
            counterpart = resolve_counterpart(hit.matched_label, new_vocab, max_distance)
        records.append(
            DriftRecord(
                item.doc_id,
                item.approach,
                doc_strata[item.doc_id],
                hit.matched_label,
                hit.label_kind,
                hit.pref_label,
                hit.concept_id,
                classification,
                counterpart,
            )
        )
    return records


@dataclass(frozen=True)
class Tally:
    documents: int = 0
    total_hits: int = 0
    exclusive: int = 0
    present_in_new: int = 0
    facet_exclusions: int = 0
    data_errors: int = 0
    drift_total: int = 0
    drift_authorized: int = 0
    drift_variant: int = 0

    def add_result(self, hit_count: int) -> "Tally":
        return replace(self, documents=self.documents + 1, total_hits=self.total_hits + hit_count)

    def add_record(self, record: DriftRecord) -> "Tally":
        updates = {"exclusive": self.exclusive + 1}
        if record.classification == PRESENT_IN_NEW:
            updates["present_in_new"] = self.present_in_new + 1
        elif record.classification == FACET_EXCLUSION:
            updates["facet_exclusions"] = self.facet_exclusions + 1
        elif record.classification == DATA_ERROR:
            updates["data_errors"] = self.data_errors + 1
        else:
            updates["drift_total"] = self.drift_total + 1
            if record.label_kind == AUTHORIZED:
                updates["drift_authorized"] = self.drift_authorized + 1
            else:
                updates["drift_variant"] = self.drift_variant + 1
        return replace(self, **updates)


@dataclass(frozen=True)
class StatsReport:
    old_version_tag: str
    new_version_tag: str
    overall: Tally
    by_approach: Mapping[str, Tally]  # FullText, NER
    by_stratum: Mapping[str, Tally]  # Short, Medium, Long
    by_cell: Mapping[tuple[str, str], Tally]  # (approach, stratum)
    facet_filter_available: bool = True


def _doc_strata_from(docs_or_map: Iterable[Document] | Mapping[str, str]) -> dict[str, str]:
    if isinstance(docs_or_map, Mapping):
        return dict(docs_or_map)
    return {d.doc_id: d.stratum for d in docs_or_map}


def compute_statistics(
    records: Sequence[DriftRecord],
    old_results: Sequence[IndexingResult],
    docs: Iterable[Document] | Mapping[str, str],
    facet_filter_available: bool = True,
    old_version_tag: str | None = None,
    new_version_tag: str = "",
) -> StatsReport:
    """Tally totals and slices by approach, stratum, and both."""
    doc_strata = _doc_strata_from(docs)
    overall = Tally()
    by_approach = {a: Tally() for a in APPROACHES}
    by_stratum = {s: Tally() for s in STRATA}
    by_cell = {(a, s): Tally() for a in APPROACHES for s in STRATA}

    pairs: set[tuple[str, str]] = set()
    for result in old_results:
        stratum = doc_strata.get(result.doc_id)
        if stratum is None:
            raise DataError(f"no stratum known for document {result.doc_id!r}")
        pairs.add((result.doc_id, result.approach))
        count = len(result.hits)
        overall = overall.add_result(count)
        by_approach[result.approach] = by_approach[result.approach].add_result(count)
        by_stratum[stratum] = by_stratum[stratum].add_result(count)
        cell = (result.approach, stratum)
        by_cell[cell] = by_cell[cell].add_result(count)

    for record in records:
        if (record.doc_id, record.approach) not in pairs:
            raise DataError(
                f"drift record for {record.doc_id!r}/{record.approach} has no indexing result"
            )
        stratum = doc_strata[record.doc_id]
        overall = overall.add_record(record)
        by_approach[record.approach] = by_approach[record.approach].add_record(record)
        by_stratum[stratum] = by_stratum[stratum].add_record(record)
        cell = (record.approach, stratum)
        by_cell[cell] = by_cell[cell].add_record(record)

    tag = old_version_tag
    if tag is None:
        tag = old_results[0].version_tag if old_results else ""
    return StatsReport(
        tag,
        new_version_tag,
        overall,
        by_approach,
        by_stratum,
        by_cell,
        facet_filter_available,
    )
