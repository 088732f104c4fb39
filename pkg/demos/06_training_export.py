"""Export fine-tuning pairs: prompts in, true/false targets out.

A relevance model is fine-tuned on the same template it serves:
the input is the rendered prompt, the target is "true" when the label
is Exact and "false" for everything else (Substitute, Complement,
Irrelevant). Multiple judgment sets can be exported in one file,
each row tagged with its source task; rows sort by (query_id,
product_id, source_task) so the file is reproducible byte for byte.
"""

import tempfile
from pathlib import Path

from shoprank import (
    Catalog,
    EsciLabel,
    LengthBudget,
    Product,
    QueryJudgments,
    export_training,
)

products = {
    ("B1", "us"): Product(product_id="B1", locale="us",
                          title="red canvas shoe", brand="Acme"),
    ("B2", "us"): Product(product_id="B2", locale="us",
                          title="shoe cleaning brush"),
    ("B3", "us"): Product(product_id="B3", locale="us",
                          title="blue wool hat"),
}
queries = (
    QueryJudgments(
        query_id="q1", query_text="red shoe", locale="us",
        judgments=(("B1", EsciLabel.EXACT),
                   ("B2", EsciLabel.COMPLEMENT),
                   ("B3", EsciLabel.IRRELEVANT)),
    ),
)
catalog = Catalog(products=products, queries=queries)

ranking_task = {"task1": catalog.queries}
out = Path(tempfile.mkdtemp(prefix="shoprank_demo_")) / "train.jsonl"
count = export_training(catalog, ranking_task, LengthBudget(), out)

print(f"exported {count} examples to {out}:")
print()
for line in out.read_text().splitlines():
    print(f"  {line}")
print()
print("Only the Exact row maps to target 'true'. The same file format")
print("feeds binary classification fine-tuning for both the ranking")
print("task and the label-prediction task; pass a second judgment set")
print("as tasks={'task1': ..., 'task2': ...} to merge them.")
