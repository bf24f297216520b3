"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the criterion lines.
"""

import random
import time
from fractions import Fraction
from pathlib import Path

import pytest

from chronoterm.drift import (
    ANY_LABEL,
    AUTHORIZED_ONLY,
    DRIFT,
    PRESENT_IN_NEW,
    PROBABLE,
    VERIFIED,
    DriftRecord,
    classify,
    compute_statistics,
    resolve_counterpart,
)
from chronoterm.errors import CorpusError
from chronoterm.indexer import (
    Hit,
    IndexingResult,
    build_match_index,
    index_document,
    index_entities,
)
from chronoterm.pipeline import PipelineConfig, run_pipeline
from chronoterm.rake import extract_candidates, score_candidates
from chronoterm.reports import render_stats_report
from chronoterm.textprep import (
    LONG,
    MEDIUM,
    SHORT,
    Document,
    EntityDocument,
    classify_stratum,
    stratified_sample,
)
from chronoterm.vocab import Concept, build_vocabulary, lookup_exact, normalize_label

from conftest import REPLACEMENT_PAIRS, UNLISTED_VARIANT, contemporary_vocab, historical_vocab
from conftest import write_synthetic_corpus
from test_drift import _random_concepts, oracle_classify


def _passed(number: int, name: str) -> None:
    print(f"[acceptance] criterion {number} ({name}): PASS")


# ---------------------------------------------------------------------------
# 1. statistics arithmetic
# ---------------------------------------------------------------------------

# per (approach, stratum): documents, hits, exclusive, authorized drift,
# variant drift
CELLS = {
    ("FullText", SHORT): (40, 400, 137, 16, 7),
    ("FullText", MEDIUM): (40, 386, 113, 16, 9),
    ("FullText", LONG): (10, 100, 27, 3, 4),
    ("NER", SHORT): (40, 142, 34, 5, 6),
    ("NER", MEDIUM): (40, 350, 110, 26, 6),
    ("NER", LONG): (10, 100, 37, 8, 1),
}


def _fixture_report():
    doc_ids = {
        SHORT: [f"s{i:02d}" for i in range(40)],
        MEDIUM: [f"m{i:02d}" for i in range(40)],
        LONG: [f"l{i:02d}" for i in range(10)],
    }
    doc_strata = {d: s for s, ids in doc_ids.items() for d in ids}

    old_results = []
    records = []
    for (approach, stratum), (n_docs, hits, exclusive, auth, var) in CELLS.items():
        docs = doc_ids[stratum][:n_docs]
        base, extra = divmod(hits, n_docs)
        for i, doc in enumerate(docs):
            count = base + (1 if i < extra else 0)
            result_hits = tuple(
                Hit(f"c{i}-{j}", f"term {j}", f"term {j}", "authorized", "exact", Fraction(1))
                for j in range(count)
            )
            old_results.append(IndexingResult(doc, "old", approach, result_hits))
        spec = [(DRIFT, "authorized")] * auth + [(DRIFT, "variant")] * var
        spec += [(PRESENT_IN_NEW, "authorized")] * (exclusive - auth - var)
        for i, (classification, kind) in enumerate(spec):
            doc = docs[i % n_docs]
            records.append(
                DriftRecord(
                    doc, approach, stratum, f"x{i}", kind, f"x{i}", "old-c",
                    classification, None,
                )
            )
    return compute_statistics(
        records, old_results, doc_strata, new_version_tag="new"
    )


EXPECTED_SAMPLE_ROWS = [
    "| Number Of Documents | 40 | 40 | 10 | 40 | 40 | 10 | 180 |",
    "| Total Historical Indexing Terms | 400 | 386 | 100 | 142 | 350 | 100 | 1478 |",
    "| Terms Exclusive To Historical Output | 137/400 (34.25%) | 113/386 (29.27%) "
    "| 27/100 (27.00%) | 34/142 (23.94%) | 110/350 (31.43%) | 37/100 (37.00%) "
    "| 458/1478 (30.98%) |",
    "| Authorized Terms Demonstrating Drift | 16 | 16 | 3 | 5 | 26 | 8 | 74 |",
    "| Variant Terms Demonstrating Drift | 7 | 9 | 4 | 6 | 6 | 1 | 33 |",
    "| Total Terms Demonstrating Drift | 23/400 (5.75%) | 25/386 (6.47%) "
    "| 7/100 (7.00%) | 11/142 (7.74%) | 32/350 (9.14%) | 9/100 (9.00%) "
    "| 107/1478 (7.24%) |",
]


def test_criterion_1_statistics_arithmetic():
    started = time.perf_counter()
    report = _fixture_report()
    rendered = render_stats_report(report, "md")
    lines = rendered.splitlines()

    # overview, shaped like the headline table
    assert "| Total Documents | 180 |" in lines
    assert "| Total Historical Indexing Terms | 1478 |" in lines
    assert "| Terms Exclusive To Historical Output | 458/1478 (30.98%) |" in lines
    assert "| Terms Demonstrating Temporal Drift | 107/1478 (7.24%) |" in lines

    # authorized / variant split
    assert "| Authorized Term Results | 74/107 (69.16%) |" in lines
    assert "| Variant Term Results | 33/107 (30.84%) |" in lines

    # per-approach table
    assert (
        "| Terms Exclusive To Historical Output | 277/886 (31.26%) "
        "| 181/592 (30.57%) | 458/1478 (30.98%) |" in lines
    )
    assert (
        "| Terms Demonstrating Temporal Drift | 55/886 (6.20%) "
        "| 52/592 (8.78%) | 107/1478 (7.24%) |" in lines
    )

    # per-stratum table
    assert (
        "| Terms Demonstrating Temporal Drift | 34/542 (6.27%) | 57/736 (7.74%) "
        "| 16/200 (8.00%) | 107/1478 (7.24%) |" in lines
    )

    # full six-cell table, every row exact
    for row in EXPECTED_SAMPLE_ROWS:
        assert row in lines, row

    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"took {elapsed:.2f}s"
    _passed(1, "statistics arithmetic")


# ---------------------------------------------------------------------------
# 2. counterpart fixture
# ---------------------------------------------------------------------------


def test_criterion_2_counterpart_fixture():
    started = time.perf_counter()
    new_vocab = contemporary_vocab()
    old_vocab = historical_vocab()
    assert len(old_vocab) == 11

    outcomes = {}
    for concept in old_vocab.concepts:
        term = concept.pref_label
        classification = classify(term, "authorized", term, new_vocab)
        assert classification == DRIFT, term
        outcomes[term] = resolve_counterpart(term, new_vocab)

    verified = {t: c for t, c in outcomes.items() if c and c.status == VERIFIED}
    probable = {t: c for t, c in outcomes.items() if c and c.status == PROBABLE}
    assert len(outcomes) == 11
    assert len(verified) == 10
    assert len(probable) == 1
    counterpart = probable[UNLISTED_VARIANT]
    assert counterpart.label == "Uzbeks"
    assert counterpart.distance == 1
    for old, new in REPLACEMENT_PAIRS:
        if old == UNLISTED_VARIANT:
            continue
        assert verified[old].label == new
        assert verified[old].distance == 0

    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"took {elapsed:.2f}s"
    _passed(2, "counterpart fixture")


# ---------------------------------------------------------------------------
# 3. extraction and scoring oracle
# ---------------------------------------------------------------------------

STOP = {"the", "of", "and", "a", "old", "favor"}

# (text, expected {candidate text: score}); every table worked by hand
RAKE_ORACLE = [
    ("deep learning", {"deep learning": Fraction(4)}),
    ("deep learning, deep parsing", {"deep learning": Fraction(4), "deep parsing": Fraction(4)}),
    ("knowledge", {"knowledge": Fraction(1)}),
    (
        "trade routes; the trade winds favor old routes",
        {
            "trade routes": Fraction(7, 2),
            "trade winds": Fraction(4),
            "routes": Fraction(3, 2),
        },
    ),
    ("deep deep learning", {"deep deep learning": Fraction(9)}),
    (
        "the Saracens invaded; trade routes collapsed",
        {"Saracens invaded": Fraction(4), "trade routes collapsed": Fraction(9)},
    ),
]


def test_criterion_3_extraction_scoring_oracle():
    assert len(RAKE_ORACLE) >= 5
    for text, expected in RAKE_ORACLE:
        assert len(text.split()) <= 25
        scored = score_candidates(extract_candidates(text, STOP))
        got = {}
        for cand in scored:
            assert cand.text not in got or got[cand.text] == cand.score
            got[cand.text] = cand.score
        assert got == expected, text
    _passed(3, "extraction and scoring oracle")


# ---------------------------------------------------------------------------
# 4. classification oracle
# ---------------------------------------------------------------------------

_TERMS = ("alder", "birch", "cedar", "dogwood", "elm", "fir", "gorse",
          "hazel", "iris", "juniper", "kelp", "larch", "zebrawood")


def test_criterion_4_classification_oracle():
    rng = random.Random(20_26)
    trials = 0
    while trials < 1000:
        new_concepts = _random_concepts(rng, "n")
        full_concepts = _random_concepts(rng, "f") if rng.random() < 0.5 else None
        new_vocab = build_vocabulary("new", new_concepts)
        full_vocab = (
            build_vocabulary("full", full_concepts) if full_concepts is not None else None
        )
        exclusions = frozenset(
            normalize_label(w) for w in rng.sample(_TERMS, rng.randint(0, 3))
        )
        presence = rng.choice([AUTHORIZED_ONLY, ANY_LABEL])
        term = rng.choice([rng.choice(_TERMS), f"{rng.choice(_TERMS)} old"])
        kind = rng.choice(["authorized", "variant"])
        auth_form = rng.choice([term, rng.choice(_TERMS)])
        got = classify(term, kind, auth_form, new_vocab, full_vocab, exclusions, presence)
        want = oracle_classify(
            term, kind, auth_form, new_concepts, full_concepts, exclusions, presence
        )
        assert got == want, (term, kind, auth_form, presence, got, want)
        trials += 1
    assert trials == 1000
    _passed(4, "classification oracle")


# ---------------------------------------------------------------------------
# 5. fixed recall
# ---------------------------------------------------------------------------

_POOL = ("alder", "birch", "cedar", "drift", "ember", "fable", "gleam",
         "haven", "ingot", "jetty", "knoll", "loch")


def _random_vocab(rng: random.Random):
    n = rng.randint(3, 8)
    concepts = []
    used = set()
    for i in range(n):
        words = rng.sample(_POOL, rng.randint(1, 2))
        label = " ".join(words)
        if label in used:
            continue
        used.add(label)
        variants = []
        if rng.random() < 0.4:
            v = " ".join(rng.sample(_POOL, 1))
            if v not in used:
                used.add(v)
                variants.append(v)
        concepts.append(Concept(f"c{i}", label, tuple(variants)))
    return build_vocabulary("rand", concepts)


def _random_text(rng: random.Random) -> str:
    parts = []
    for _ in range(rng.randint(3, 30)):
        parts.append(rng.choice(_POOL))
        if rng.random() < 0.25:
            parts.append(rng.choice([".", ",", ";", "the"]))
    return " ".join(parts)


def _check_result(result: IndexingResult, vocab, cap: int) -> None:
    assert len(result.hits) <= cap
    keys = [(-h.score, h.pref_label, h.concept_id) for h in result.hits]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
    ids = [h.concept_id for h in result.hits]
    assert len(set(ids)) == len(ids)
    for hit in result.hits:
        match = lookup_exact(vocab, hit.matched_label)
        assert match is not None
        assert match.concept.concept_id == hit.concept_id
        assert match.kind == hit.label_kind


def test_criterion_5_fixed_recall():
    rng = random.Random(7_7_7)
    stopwords = {"the"}
    checked = 0
    for _ in range(250):
        vocab = _random_vocab(rng)
        index = build_match_index(vocab, stopwords)
        cap = rng.randint(1, 12)
        for _ in range(20):
            doc = Document(f"d{checked}", _random_text(rng), 500, SHORT)
            result = index_document(doc, index, stopwords, cap)
            _check_result(result, vocab, cap)
            checked += 1
            entities = tuple(
                (rng.choice(_POOL), "NORP") for _ in range(rng.randint(0, 6))
            )
            ed = EntityDocument(doc.doc_id, entities)
            result = index_entities(ed, index, stopwords, cap)
            _check_result(result, vocab, cap)
            checked += 1
    assert checked >= 10_000
    _passed(5, "fixed recall")


# ---------------------------------------------------------------------------
# 6. stratification
# ---------------------------------------------------------------------------


def test_criterion_6_stratification():
    with pytest.raises(CorpusError):
        classify_stratum(99)
    assert classify_stratum(100) == SHORT
    assert classify_stratum(2000) == SHORT
    assert classify_stratum(2001) == MEDIUM
    assert classify_stratum(99_999) == MEDIUM
    assert classify_stratum(100_000) == LONG

    words = {SHORT: 150, MEDIUM: 3_000, LONG: 120_000}
    corpus = [
        Document(f"{s[0].lower()}{i:03d}", "", words[s], s)
        for s in (SHORT, MEDIUM, LONG)
        for i in range(60 if s != LONG else 15)
    ]
    sample = stratified_sample(corpus, (40, 40, 10), seed=2024)
    assert len(sample) == 90
    counts = {s: sum(1 for d in sample if d.stratum == s) for s in (SHORT, MEDIUM, LONG)}
    assert counts == {SHORT: 40, MEDIUM: 40, LONG: 10}
    again = stratified_sample(corpus, (40, 40, 10), seed=2024)
    assert sample == again
    _passed(6, "stratification")


# ---------------------------------------------------------------------------
# 7. end-to-end determinism
# ---------------------------------------------------------------------------


def test_criterion_7_end_to_end_determinism(tmp_path):
    started = time.perf_counter()
    paths = write_synthetic_corpus(tmp_path / "corpus")

    def config(out: Path, workers: int) -> PipelineConfig:
        return PipelineConfig(
            vocab_old=paths["vocab_old"],
            vocab_new=paths["vocab_new"],
            vocab_new_full=paths["vocab_new_full"],
            corpus_manifest=paths["manifest"],
            entities_dir=paths["entities"],
            stopwords=paths["stopwords"],
            exclusions=paths["exclusions"],
            out_dir=out,
            strata_sizes=(25, 15, 2),
            seed=99,
            workers=workers,
        )

    outs = [tmp_path / "run-a", tmp_path / "run-b", tmp_path / "run-c"]
    run_pipeline(config(outs[0], workers=1))
    run_pipeline(config(outs[1], workers=1))
    run_pipeline(config(outs[2], workers=3))

    for name in ("stats.tsv", "drift.tsv", "hits.tsv"):
        first = (outs[0] / name).read_bytes()
        assert first == (outs[1] / name).read_bytes(), f"{name}: rerun differs"
        assert first == (outs[2] / name).read_bytes(), f"{name}: worker count leaks"

    # sanity: the corpus really is analysis-worthy
    records = (outs[0] / "drift.tsv").read_text(encoding="utf-8").splitlines()
    assert len(records) > 10

    elapsed = time.perf_counter() - started
    assert elapsed < 30.0, f"took {elapsed:.1f}s"
    _passed(7, "end-to-end determinism")


# ---------------------------------------------------------------------------
# 8. monotonicity
# ---------------------------------------------------------------------------


def test_criterion_8_monotonicity():
    rng = random.Random(31)
    flipped = 0
    attempts = 0
    while flipped < 500:
        attempts += 1
        assert attempts < 20_000, "generator starved"
        concepts = _random_concepts(rng, "n")
        if not concepts:
            continue
        vocab = build_vocabulary("new", concepts)
        term = rng.choice([rng.choice(_TERMS), f"{rng.choice(_TERMS)} gone"])
        kind = rng.choice(["authorized", "variant"])
        auth_form = rng.choice([term, rng.choice(_TERMS)])
        if classify(term, kind, auth_form, vocab, presence=ANY_LABEL) != DRIFT:
            continue
        target = rng.randrange(len(concepts))
        grown = [
            Concept(
                c.concept_id,
                c.pref_label,
                c.variant_labels + ((term,) if i == target else ()),
            )
            for i, c in enumerate(concepts)
        ]
        grown_vocab = build_vocabulary("new", grown)
        got = classify(term, kind, auth_form, grown_vocab, presence=ANY_LABEL)
        assert got == PRESENT_IN_NEW, (term, kind, got)
        flipped += 1
    assert flipped == 500
    _passed(8, "monotonicity")
