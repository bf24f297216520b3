"""Match candidate phrases to vocabulary concepts with a fixed recall cap.

Labels and phrases are compared as lists of stemmed content tokens. A phrase
matches a label exactly when the token lists are equal, or as a truncation
wildcard when only the final token differs and the phrase's final stem is a
proper prefix (at least four characters) of the label's final stem.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .rake import CandidatePhrase, ranked_candidates, top_candidates
from .textprep import FULL_TEXT, NER, Document, EntityDocument, stem, tokenize
from .vocab import Vocabulary

EXACT = "exact"
PREFIX = "prefix"

MIN_PREFIX_LEN = 4
DEFAULT_RECALL_CAP = 10


@dataclass(frozen=True)
class IndexEntry:
    concept_id: str
    label_kind: str  # authorized | variant
    label: str  # original spelling
    pref_label: str


@dataclass(frozen=True)
class MatchIndex:
    version_tag: str
    exact: Mapping[tuple[str, ...], tuple[IndexEntry, ...]]
    by_head: Mapping[tuple[str, ...], tuple[tuple[str, tuple[IndexEntry, ...]], ...]]
    # key-minus-last-token -> ((final token, entries), ...) for wildcard lookups
    skipped_labels: tuple[str, ...]  # labels with no content tokens


@dataclass(frozen=True)
class Hit:
    concept_id: str
    pref_label: str
    matched_label: str
    label_kind: str
    match_kind: str  # exact | prefix
    score: Fraction


@dataclass(frozen=True)
class IndexingResult:
    doc_id: str
    version_tag: str
    approach: str  # FullText | NER
    hits: tuple[Hit, ...]


def label_key(label: str, stopwords: set[str]) -> tuple[str, ...]:
    """Stemmed content tokens of a label (stopwords removed)."""
    return tuple(stem(t) for t in tokenize(label) if t.lower() not in stopwords)


def build_match_index(vocab: Vocabulary, stopwords: set[str]) -> MatchIndex:
    exact: dict[tuple[str, ...], list[IndexEntry]] = {}
    skipped: list[str] = []
    for concept in vocab.concepts:
        labels = [(concept.pref_label, "authorized")]
        labels += [(v, "variant") for v in concept.variant_labels]
        for label, kind in labels:
            key = label_key(label, stopwords)
            if not key:
                skipped.append(label)
                continue
            entry = IndexEntry(concept.concept_id, kind, label, concept.pref_label)
            exact.setdefault(key, []).append(entry)

    frozen_exact = {
        key: tuple(sorted(entries, key=lambda e: (e.concept_id, e.label_kind, e.label)))
        for key, entries in exact.items()
    }
    by_head: dict[tuple[str, ...], list[tuple[str, tuple[IndexEntry, ...]]]] = {}
    for key, entries in sorted(frozen_exact.items()):
        by_head.setdefault(key[:-1], []).append((key[-1], entries))
    return MatchIndex(
        vocab.version_tag,
        frozen_exact,
        {head: tuple(tails) for head, tails in by_head.items()},
        tuple(skipped),
    )


@dataclass(frozen=True)
class PhraseMatch:
    entry: IndexEntry
    match_kind: str


def match_phrase(index: MatchIndex, phrase: CandidatePhrase) -> list[PhraseMatch]:
    """All concept labels the phrase matches, exact matches shadowing
    wildcard matches to the same concept."""
    words = tuple(phrase.words)
    if not words:
        return []
    matches: list[PhraseMatch] = []
    exact_ids: set[str] = set()
    for entry in index.exact.get(words, ()):
        matches.append(PhraseMatch(entry, EXACT))
        exact_ids.add(entry.concept_id)
    last = words[-1]
    if len(last) >= MIN_PREFIX_LEN:
        for tail, entries in index.by_head.get(words[:-1], ()):
            if tail != last and tail.startswith(last):
                for entry in entries:
                    if entry.concept_id not in exact_ids:
                        matches.append(PhraseMatch(entry, PREFIX))
    return matches


def _collect_hits(
    candidates: Sequence[CandidatePhrase], index: MatchIndex, recall_cap: int
) -> tuple[Hit, ...]:
    """Fold ranked candidates into at most recall_cap distinct concept hits.

    Concept score is the max score over its matching candidates. The recorded
    label comes from the best-scoring candidate, preferring exact matches,
    then authorized labels, then the lexicographically smaller label.
    """
    best: dict[str, Hit] = {}
    for cand in candidates:
        for match in match_phrase(index, cand):
            entry = match.entry
            hit = Hit(
                entry.concept_id,
                entry.pref_label,
                entry.label,
                entry.label_kind,
                match.match_kind,
                cand.score,
            )
            prior = best.get(entry.concept_id)
            if prior is None or _hit_rank(hit) < _hit_rank(prior):
                best[entry.concept_id] = hit
    ranked = sorted(
        best.values(), key=lambda h: (-h.score, h.pref_label, h.concept_id)
    )
    return tuple(ranked[:recall_cap])


def _hit_rank(hit: Hit) -> tuple:
    return (
        -hit.score,
        0 if hit.match_kind == EXACT else 1,
        0 if hit.label_kind == "authorized" else 1,
        hit.matched_label,
    )


def index_candidates(
    doc_id: str,
    candidates: Sequence[CandidatePhrase],
    index: MatchIndex,
    recall_cap: int,
    approach: str,
) -> IndexingResult:
    """Match pre-extracted candidates; lets one extraction feed many indexes."""
    if recall_cap < 1:
        raise ValueError("recall_cap must be at least 1")
    return IndexingResult(
        doc_id, index.version_tag, approach, _collect_hits(candidates, index, recall_cap)
    )


def index_document(
    doc: Document,
    index: MatchIndex,
    stopwords: set[str],
    recall_cap: int = DEFAULT_RECALL_CAP,
) -> IndexingResult:
    """Index full text: RAKE candidates matched against the vocabulary."""
    candidates = ranked_candidates(doc.text, stopwords)
    return index_candidates(doc.doc_id, candidates, index, recall_cap, FULL_TEXT)


def entity_candidates(ed: EntityDocument, stopwords: set[str]) -> list[CandidatePhrase]:
    """Distinct entity surfaces scored by occurrence count, ranked."""
    counts: dict[str, int] = {}
    for surface, _tag in ed.entities:
        counts[surface] = counts.get(surface, 0) + 1
    phrases = []
    for surface, count in counts.items():
        words = tuple(stem(t) for t in tokenize(surface) if t.lower() not in stopwords)
        if not words:
            continue
        phrases.append(CandidatePhrase(" ".join(tokenize(surface)), words, Fraction(count)))
    if not phrases:
        return []
    return top_candidates(phrases, len(phrases))


def index_entities(
    ed: EntityDocument,
    index: MatchIndex,
    stopwords: set[str],
    recall_cap: int = DEFAULT_RECALL_CAP,
) -> IndexingResult:
    """Index pre-extracted entity surfaces instead of running RAKE."""
    candidates = entity_candidates(ed, stopwords)
    return index_candidates(ed.doc_id, candidates, index, recall_cap, NER)
