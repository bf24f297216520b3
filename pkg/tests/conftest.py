"""Shared fixtures: replacement-pair vocabularies and synthetic corpora."""

from __future__ import annotations

import json
import random
from pathlib import Path

import pytest

from chronoterm.vocab import Concept, Vocabulary, build_vocabulary

# Historical headings paired with the contemporary headings that replaced
# them. Every historical term is recorded as a variant label of its
# replacement except "Uzbegs", which the contemporary vocabulary dropped
# without a cross-reference.
REPLACEMENT_PAIRS = (
    ("Mohammedans", "Muslims"),
    ("Saracens", "Islamic Empire"),
    ("Moors (The race)", "Muslims"),
    ("Gipsies", "Romanies"),
    ("Uzbegs", "Uzbeks"),
    ("Scotch", "Scots"),
    ("Omayyads", "Umayyad dynasty"),
    ("Malay Race", "Malays (Asian people)"),
    ("Gallas", "Oromo (African people)"),
    ("Polyzoa", "Bryozoa"),
    ("Man", "Human beings"),
)

UNLISTED_VARIANT = "Uzbegs"

STOPWORDS = {
    "the", "of", "a", "an", "and", "in", "to", "was", "were", "is", "are",
    "it", "its", "this", "that", "as", "by", "for", "with", "on", "at", "from",
}


def historical_vocab() -> Vocabulary:
    concepts = [
        Concept(f"h{i:02d}", old) for i, (old, _new) in enumerate(REPLACEMENT_PAIRS, 1)
    ]
    return build_vocabulary("old-edition", concepts)


def contemporary_vocab() -> Vocabulary:
    variants: dict[str, list[str]] = {}
    order: list[str] = []
    for old, new in REPLACEMENT_PAIRS:
        if new not in variants:
            variants[new] = []
            order.append(new)
        if old != UNLISTED_VARIANT:
            variants[new].append(old)
    concepts = [
        Concept(f"n{i:02d}", heading, tuple(variants[heading]))
        for i, heading in enumerate(order, 1)
    ]
    return build_vocabulary("new-edition", concepts)


@pytest.fixture
def old_vocab() -> Vocabulary:
    return historical_vocab()


@pytest.fixture
def new_vocab() -> Vocabulary:
    return contemporary_vocab()


def vocab_jsonl(vocab: Vocabulary) -> str:
    lines = []
    for c in vocab.concepts:
        obj = {"id": c.concept_id, "prefLabel": c.pref_label, "altLabels": list(c.variant_labels)}
        lines.append(json.dumps(obj, ensure_ascii=False))
    return "\n".join(lines) + "\n"


_FILLER = (
    "winter harvest stone bridge river valley cloud thunder lantern candle "
    "meadow forest harbor vessel journey mountain summit garden orchard mill"
).split()


def filler_text(rng: random.Random, words: int) -> str:
    out = []
    while len(out) < words:
        chunk = rng.sample(_FILLER, rng.randint(3, 6))
        out.extend(chunk)
        out.append(rng.choice([".", ";", ","]))
    return " ".join(out)


def write_replacement_corpus(root: Path) -> dict[str, Path]:
    """Three short documents that mention every historical heading, plus
    vocabularies, stopwords, and a manifest, laid out for the CLI."""
    rng = random.Random(99)
    root.mkdir(parents=True, exist_ok=True)
    texts_dir = root / "texts"
    texts_dir.mkdir(exist_ok=True)

    mentions = {
        "doc-1": ["the Mohammedans,", "the Saracens,", "the Moors race,", "the Gipsies,"],
        "doc-2": ["the Uzbegs,", "the Scotch,", "the Omayyads,", "the Malay race,"],
        "doc-3": ["the Gallas,", "the Polyzoa,", "the man,"],
    }
    manifest_lines = ["doc_id\tpath\tedition"]
    for doc_id, phrases in mentions.items():
        body = f" {filler_text(rng, 40)} ".join(phrases)
        text = f"{filler_text(rng, 60)}. {body} {filler_text(rng, 60)}."
        (texts_dir / f"{doc_id}.txt").write_text(text, encoding="utf-8")
        manifest_lines.append(f"{doc_id}\ttexts/{doc_id}.txt\t3rd")

    paths = {
        "manifest": root / "manifest.tsv",
        "vocab_old": root / "old-edition.jsonl",
        "vocab_new": root / "new-edition.jsonl",
        "stopwords": root / "stopwords.txt",
    }
    paths["manifest"].write_text("\n".join(manifest_lines) + "\n", encoding="utf-8")
    paths["vocab_old"].write_text(vocab_jsonl(historical_vocab()), encoding="utf-8")
    paths["vocab_new"].write_text(vocab_jsonl(contemporary_vocab()), encoding="utf-8")
    paths["stopwords"].write_text("\n".join(sorted(STOPWORDS)) + "\n", encoding="utf-8")
    return paths


# ---------------------------------------------------------------------------
# larger synthetic corpus for determinism runs
# ---------------------------------------------------------------------------

_TOPIC_WORDS = (
    "granite basalt quartz marble slate obsidian gypsum mica feldspar pumice "
    "falcon heron osprey swallow plover kestrel bittern curlew avocet dunlin "
    "barley sorghum millet lentil clover alfalfa vetch flax hemp madder"
).split()


def _synthetic_vocabularies(rng: random.Random) -> tuple[list[Concept], list[Concept], list[Concept]]:
    """Old, new, and full-new concept lists with staged drift.

    A quarter of the old headings survive verbatim, a quarter are demoted to
    variants of renamed concepts, a quarter exist only in the full
    vocabulary, and a quarter vanish entirely. Surviving and vanished
    headings also carry an archaic variant form so that variant-kind hits
    reach the classifier.
    """
    old_concepts = []
    new_concepts = []
    full_concepts = []
    pool = list(_TOPIC_WORDS)
    rng.shuffle(pool)
    for i in range(24):
        word = pool[i]
        old_id = f"o{i:03d}"
        heading = word.capitalize()
        bucket = i % 4
        old_variants = (f"Old {heading}",) if bucket in (0, 3) else ()
        old_concepts.append(Concept(old_id, heading, old_variants))
        if bucket == 0:  # survives unchanged
            new_concepts.append(Concept(f"n{i:03d}", heading))
            full_concepts.append(Concept(f"f{i:03d}", heading))
        elif bucket == 1:  # renamed; old heading kept as a variant
            renamed = f"{heading} studies"
            new_concepts.append(Concept(f"n{i:03d}", renamed, (heading,)))
            full_concepts.append(Concept(f"f{i:03d}", renamed, (heading,)))
        elif bucket == 2:  # only in the full vocabulary
            full_concepts.append(Concept(f"f{i:03d}", heading))
        # bucket 3: gone everywhere
    return old_concepts, new_concepts, full_concepts


def write_synthetic_corpus(
    root: Path,
    n_short: int = 60,
    n_medium: int = 38,
    n_long: int = 4,
    seed: int = 1234,
) -> dict[str, Path]:
    """A >=100-document corpus with entities, built deterministically."""
    rng = random.Random(seed)
    root.mkdir(parents=True, exist_ok=True)
    texts_dir = root / "texts"
    texts_dir.mkdir(exist_ok=True)
    entities_dir = root / "entities"
    entities_dir.mkdir(exist_ok=True)

    old_concepts, new_concepts, full_concepts = _synthetic_vocabularies(rng)
    headings = [c.pref_label for c in old_concepts]
    surfaces = headings + [v for c in old_concepts for v in c.variant_labels]

    def doc_text(words: int) -> str:
        parts = []
        count = 0
        while count < words:
            if rng.random() < 0.2:
                phrase = f"the {rng.choice(surfaces)},"
            else:
                phrase = " ".join(rng.sample(_TOPIC_WORDS, rng.randint(2, 5)))
                phrase += rng.choice([".", ";", ",", ""])
            parts.append(phrase)
            count += len(phrase.split())
        return " ".join(parts)

    sizes = (
        [("s", rng.randint(120, 900)) for _ in range(n_short)]
        + [("m", rng.randint(2100, 4000)) for _ in range(n_medium)]
        + [("l", 100_200) for _ in range(n_long)]
    )
    manifest_lines = ["doc_id\tpath\tedition"]
    for i, (kind, words) in enumerate(sizes):
        doc_id = f"{kind}{i:03d}"
        if kind == "l":
            # long entries repeat a medium body to keep generation cheap
            body = doc_text(2_000)
            reps = words // 2_000 + 1
            text = " ".join([body] * reps)
        else:
            text = doc_text(words)
        (texts_dir / f"{doc_id}.txt").write_text(text, encoding="utf-8")
        manifest_lines.append(f"{doc_id}\ttexts/{doc_id}.txt\t")
        mentions = [rng.choice(surfaces) for _ in range(rng.randint(0, 12))]
        entities = [{"text": s, "type": "NORP"} for s in mentions]
        (entities_dir / f"{doc_id}.jsonl").write_text(
            json.dumps({"doc_id": doc_id, "entities": entities}) + "\n", encoding="utf-8"
        )

    paths = {
        "manifest": root / "manifest.tsv",
        "vocab_old": root / "vocab-old.jsonl",
        "vocab_new": root / "vocab-new.jsonl",
        "vocab_new_full": root / "vocab-new-full.jsonl",
        "stopwords": root / "stopwords.txt",
        "exclusions": root / "exclusions.txt",
        "entities": entities_dir,
    }
    paths["manifest"].write_text("\n".join(manifest_lines) + "\n", encoding="utf-8")
    paths["vocab_old"].write_text(
        vocab_jsonl(build_vocabulary("vocab-old", old_concepts)), encoding="utf-8"
    )
    paths["vocab_new"].write_text(
        vocab_jsonl(build_vocabulary("vocab-new", new_concepts)), encoding="utf-8"
    )
    paths["vocab_new_full"].write_text(
        vocab_jsonl(build_vocabulary("vocab-new-full", full_concepts)), encoding="utf-8"
    )
    paths["stopwords"].write_text("\n".join(sorted(STOPWORDS)) + "\n", encoding="utf-8")
    paths["exclusions"].write_text(headings[23] + "\n", encoding="utf-8")
    return paths
