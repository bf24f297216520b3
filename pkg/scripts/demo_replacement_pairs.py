#!/usr/bin/env python3
"""End-to-end demo on a tiny corpus of historical headings.

Builds three short documents that mention eleven historical subject
headings, indexes them against a historical vocabulary (where they are
authorized) and a contemporary one (where ten survive only as variant
labels of their replacements and one was dropped without a
cross-reference), then prints the resulting drift table.

Usage:
    python scripts/demo_replacement_pairs.py [--out demo-run] [--format md]
"""

import argparse
import json
import random
from pathlib import Path

from chronoterm.pipeline import PipelineConfig, run_pipeline

PAIRS = (
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
DROPPED_CROSS_REFERENCE = "Uzbegs"

STOPWORDS = (
    "the of a an and in to was were is are it its this that as by for with on at from"
).split()

FILLER = (
    "winter harvest stone bridge river valley cloud thunder lantern candle "
    "meadow forest harbor vessel journey mountain summit garden orchard mill"
).split()

MENTIONS = {
    "doc-1": ["the Mohammedans,", "the Saracens,", "the Moors race,", "the Gipsies,"],
    "doc-2": ["the Uzbegs,", "the Scotch,", "the Omayyads,", "the Malay race,"],
    "doc-3": ["the Gallas,", "the Polyzoa,", "the man,"],
}


def filler(rng: random.Random, words: int) -> str:
    out = []
    while len(out) < words:
        out.extend(rng.sample(FILLER, rng.randint(3, 6)))
        out.append(rng.choice([".", ";", ","]))
    return " ".join(out)


def build_corpus(root: Path) -> None:
    rng = random.Random(99)
    (root / "texts").mkdir(parents=True, exist_ok=True)
    manifest = ["doc_id\tpath\tedition"]
    for doc_id, phrases in MENTIONS.items():
        body = f" {filler(rng, 40)} ".join(phrases)
        text = f"{filler(rng, 60)}. {body} {filler(rng, 60)}."
        (root / "texts" / f"{doc_id}.txt").write_text(text, encoding="utf-8")
        manifest.append(f"{doc_id}\ttexts/{doc_id}.txt\t3rd")
    (root / "manifest.tsv").write_text("\n".join(manifest) + "\n", encoding="utf-8")

    old_lines = [
        json.dumps({"id": f"h{i:02d}", "prefLabel": old, "altLabels": []})
        for i, (old, _new) in enumerate(PAIRS, 1)
    ]
    (root / "old-edition.jsonl").write_text("\n".join(old_lines) + "\n", encoding="utf-8")

    grouped: dict[str, list[str]] = {}
    for old, new in PAIRS:
        grouped.setdefault(new, [])
        if old != DROPPED_CROSS_REFERENCE:
            grouped[new].append(old)
    new_lines = [
        json.dumps({"id": f"n{i:02d}", "prefLabel": heading, "altLabels": variants})
        for i, (heading, variants) in enumerate(grouped.items(), 1)
    ]
    (root / "new-edition.jsonl").write_text("\n".join(new_lines) + "\n", encoding="utf-8")
    (root / "stopwords.txt").write_text("\n".join(STOPWORDS) + "\n", encoding="utf-8")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("demo-run"))
    parser.add_argument("--format", default="md", choices=("tsv", "json", "md"))
    args = parser.parse_args()

    corpus = args.out / "corpus"
    reports = args.out / "reports"
    build_corpus(corpus)
    config = PipelineConfig(
        vocab_old=corpus / "old-edition.jsonl",
        vocab_new=corpus / "new-edition.jsonl",
        corpus_manifest=corpus / "manifest.tsv",
        stopwords=corpus / "stopwords.txt",
        out_dir=reports,
        strata_sizes=(3, 0, 0),
        seed=17,
        fmt=args.format,
    )
    outcome = run_pipeline(config)
    print((reports / f"drift.{args.format}").read_text(encoding="utf-8"))
    tally = outcome.report.overall
    print(f"documents indexed: {tally.documents}")
    print(f"historical terms:  {tally.total_hits}")
    print(f"exclusive terms:   {tally.exclusive}")
    print(f"drifted terms:     {tally.drift_total}")
    print(f"reports under:     {reports}")


if __name__ == "__main__":
    main()
