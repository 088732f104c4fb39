"""Generate the small fixed catalog used by the end-to-end tests.

Ten queries across two locales, eight judged products each, a couple of
judgments pointing at product ids that are absent from the products file
(dangling on purpose, the validator must flag them), a few unjudged
products, and marked-up descriptions in the shapes real feeds produce.
Everything derives from one fixed seed; rerunning the script rewrites
byte-identical CSVs.

Run from the repository root:  python3 tools/make_synthetic_corpus.py
"""

from __future__ import annotations

import csv
import random
from pathlib import Path

SEED = 220722

US_NOUNS = ["shoe", "backpack", "kettle", "lamp", "blanket", "speaker",
            "notebook", "razor", "tent", "skillet"]
US_MODS = ["red", "wireless", "compact", "heavy duty", "foldable", "ceramic",
           "insulated", "adjustable", "waterproof", "cordless"]
ES_NOUNS = ["zapato", "mochila", "lampara", "manta", "altavoz"]
ES_MODS = ["rojo", "inalambrico", "compacto", "plegable", "impermeable"]
BRANDS = ["Acme", "Northway", "Brillo", "Kestrel", "Vanta", "Orbe", ""]
COLORS = ["black", "white", "red", "navy", "olive", ""]
FEATURES = ["easy to clean", "two year warranty", "ships assembled",
            "fits standard sizes", "energy efficient", "travel friendly",
            "non slip base", "quick release buckle", "extra long cord",
            "recycled materials"]

DESCRIPTION_TEMPLATES = [
    "<p>{a} {b}.</p><ul><li>{f1}</li><li>{f2}</li></ul>",
    "<div>{a}</div><div>{b} &amp; more</div>",
    "{a}<br>{b}<br>{f1}",
    "<p>The <b>{brand}</b> classic: {a} {b}.</p>",
    "<!-- feed import -->{a} {b} &#39;22 edition",
    "<table><tr><td>Feature</td> <td>{f1}</td></tr></table>{a}",
    "",
]

LABELS = ["Exact", "Substitute", "Complement", "Irrelevant"]
LABEL_WEIGHTS = [45, 30, 10, 15]


def make_product_id(rng: random.Random, taken: set[str]) -> str:
    while True:
        pid = "B0" + "".join(rng.choices("ABCDEFGHJKLMNPQRSTUVWXYZ0123456789", k=8))
        if pid not in taken:
            taken.add(pid)
            return pid


def make_title(rng: random.Random, query_words: list[str], mods: list[str],
               nouns: list[str]) -> str:
    # Mix query words with distractors so lexical overlap varies per product.
    kept = [w for w in query_words if rng.random() < 0.6]
    extra = rng.sample(mods, k=rng.randint(0, 2)) + [rng.choice(nouns)]
    words = kept + [w for w in extra if w not in kept]
    rng.shuffle(words)
    return " ".join(words) if words else rng.choice(nouns)


def make_description(rng: random.Random, brand: str) -> str:
    template = rng.choice(DESCRIPTION_TEMPLATES)
    return template.format(
        a=rng.choice(FEATURES).capitalize(),
        b=rng.choice(FEATURES),
        f1=rng.choice(FEATURES),
        f2=rng.choice(FEATURES),
        brand=brand or "house",
    )


def main() -> None:
    rng = random.Random(SEED)
    out_dir = Path(__file__).parent.parent / "tests" / "fixtures" / "synthetic"
    out_dir.mkdir(parents=True, exist_ok=True)

    queries = []
    for i in range(1, 11):
        locale = "es" if i in (3, 6, 9) else "us"
        mods, nouns = (ES_MODS, ES_NOUNS) if locale == "es" else (US_MODS, US_NOUNS)
        words = rng.sample(mods, k=rng.randint(1, 2)) + [rng.choice(nouns)]
        queries.append((f"q{i:02d}", " ".join(words), locale))

    taken: set[str] = set()
    product_rows = []
    judgment_rows = []
    for query_id, query_text, locale in queries:
        mods, nouns = (ES_MODS, ES_NOUNS) if locale == "es" else (US_MODS, US_NOUNS)
        for _ in range(8):
            pid = make_product_id(rng, taken)
            brand = rng.choice(BRANDS)
            title = make_title(rng, query_text.split(), mods, nouns)
            product_rows.append([
                pid, locale, title,
                make_description(rng, brand),
                rng.choice(FEATURES) if rng.random() < 0.7 else "",
                brand,
                rng.choice(COLORS),
            ])
            label = rng.choices(LABELS, weights=LABEL_WEIGHTS)[0]
            judgment_rows.append([query_id, query_text, locale, pid, label])

    # Judgments whose product never shipped in the products file.
    judgment_rows.append(["q03", queries[2][1], "es", "B0DANGLING", "Exact"])
    judgment_rows.append(["q08", queries[7][1], "us", "B0ORPHAN77", "Substitute"])

    # Catalog entries nothing judges.
    for locale in ("us", "us", "es", "us"):
        mods, nouns = (ES_MODS, ES_NOUNS) if locale == "es" else (US_MODS, US_NOUNS)
        pid = make_product_id(rng, taken)
        product_rows.append([
            pid, locale, make_title(rng, [], mods, nouns),
            make_description(rng, "house"), "", rng.choice(BRANDS), "",
        ])

    # One id listed in both locales with different text.
    shared = make_product_id(rng, taken)
    product_rows.append([shared, "us", "travel mug lid", "", "", "Orbe", "white"])
    product_rows.append([shared, "es", "tapa de taza", "", "", "Orbe", "blanco"])

    with open(out_dir / "products.csv", "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["product_id", "product_locale", "product_title",
                         "product_description", "product_bullet_point",
                         "product_brand", "product_color_name"])
        writer.writerows(product_rows)

    with open(out_dir / "judgments.csv", "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["query_id", "query", "query_locale", "product_id", "esci_label"])
        writer.writerows(judgment_rows)

    print(f"wrote {len(product_rows)} products, {len(judgment_rows)} judgments to {out_dir}")


if __name__ == "__main__":
    main()
