#!/usr/bin/env python3
"""Generate a synthetic corpus plus vocabulary files for pipeline experiments.

Writes a manifest, text files, per-document entity files, historical and
contemporary vocabularies (plus a full contemporary vocabulary), a stopword
list, and an exclusion list. The same seed always produces the same corpus.

Usage:
    python scripts/gen_synthetic_corpus.py out/corpus --short 60 --medium 38 --long 4
    chronoterm run --vocab-old out/corpus/vocab-old.jsonl \
        --vocab-new out/corpus/vocab-new.jsonl \
        --vocab-new-full out/corpus/vocab-new-full.jsonl \
        --corpus-manifest out/corpus/manifest.tsv \
        --entities out/corpus/entities \
        --stopwords out/corpus/stopwords.txt \
        --exclusions out/corpus/exclusions.txt \
        --strata 25,15,2 --seed 99 --out out/reports
"""

import argparse
import json
import random
from pathlib import Path

STOPWORDS = (
    "the of a an and in to was were is are it its this that as by for with on at from"
).split()

TOPIC_WORDS = (
    "granite basalt quartz marble slate obsidian gypsum mica feldspar pumice "
    "falcon heron osprey swallow plover kestrel bittern curlew avocet dunlin "
    "barley sorghum millet lentil clover alfalfa vetch flax hemp madder"
).split()


def build_vocabularies(rng: random.Random):
    """Old/new/full concept dicts with staged heading churn."""
    old, new, full = [], [], []
    pool = list(TOPIC_WORDS)
    rng.shuffle(pool)
    for i in range(24):
        heading = pool[i].capitalize()
        bucket = i % 4
        variants = [f"Old {heading}"] if bucket in (0, 3) else []
        old.append({"id": f"o{i:03d}", "prefLabel": heading, "altLabels": variants})
        if bucket == 0:
            new.append({"id": f"n{i:03d}", "prefLabel": heading, "altLabels": []})
            full.append({"id": f"f{i:03d}", "prefLabel": heading, "altLabels": []})
        elif bucket == 1:
            renamed = f"{heading} studies"
            new.append({"id": f"n{i:03d}", "prefLabel": renamed, "altLabels": [heading]})
            full.append({"id": f"f{i:03d}", "prefLabel": renamed, "altLabels": [heading]})
        elif bucket == 2:
            full.append({"id": f"f{i:03d}", "prefLabel": heading, "altLabels": []})
    return old, new, full


def doc_text(rng: random.Random, surfaces, words: int) -> str:
    parts, count = [], 0
    while count < words:
        if rng.random() < 0.2:
            phrase = f"the {rng.choice(surfaces)},"
        else:
            phrase = " ".join(rng.sample(TOPIC_WORDS, rng.randint(2, 5)))
            phrase += rng.choice([".", ";", ",", ""])
        parts.append(phrase)
        count += len(phrase.split())
    return " ".join(parts)


def jsonl(rows) -> str:
    return "\n".join(json.dumps(r, ensure_ascii=False) for r in rows) + "\n"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("out", type=Path, help="output directory")
    parser.add_argument("--short", type=int, default=60)
    parser.add_argument("--medium", type=int, default=38)
    parser.add_argument("--long", type=int, default=4)
    parser.add_argument("--seed", type=int, default=1234)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    root = args.out
    (root / "texts").mkdir(parents=True, exist_ok=True)
    (root / "entities").mkdir(exist_ok=True)

    old, new, full = build_vocabularies(rng)
    surfaces = [c["prefLabel"] for c in old]
    surfaces += [v for c in old for v in c["altLabels"]]

    sizes = (
        [("s", rng.randint(120, 900)) for _ in range(args.short)]
        + [("m", rng.randint(2100, 4000)) for _ in range(args.medium)]
        + [("l", 100_200) for _ in range(args.long)]
    )
    manifest = ["doc_id\tpath\tedition"]
    for i, (kind, words) in enumerate(sizes):
        doc_id = f"{kind}{i:03d}"
        if kind == "l":
            body = doc_text(rng, surfaces, 2_000)
            text = " ".join([body] * (words // 2_000 + 1))
        else:
            text = doc_text(rng, surfaces, words)
        (root / "texts" / f"{doc_id}.txt").write_text(text, encoding="utf-8")
        manifest.append(f"{doc_id}\ttexts/{doc_id}.txt\t")
        entities = [
            {"text": rng.choice(surfaces), "type": "NORP"}
            for _ in range(rng.randint(0, 12))
        ]
        (root / "entities" / f"{doc_id}.jsonl").write_text(
            json.dumps({"doc_id": doc_id, "entities": entities}) + "\n",
            encoding="utf-8",
        )

    (root / "manifest.tsv").write_text("\n".join(manifest) + "\n", encoding="utf-8")
    (root / "vocab-old.jsonl").write_text(jsonl(old), encoding="utf-8")
    (root / "vocab-new.jsonl").write_text(jsonl(new), encoding="utf-8")
    (root / "vocab-new-full.jsonl").write_text(jsonl(full), encoding="utf-8")
    (root / "stopwords.txt").write_text("\n".join(STOPWORDS) + "\n", encoding="utf-8")
    (root / "exclusions.txt").write_text(surfaces[23] + "\n", encoding="utf-8")
    print(f"wrote {len(sizes)} documents under {root}")


if __name__ == "__main__":
    main()
