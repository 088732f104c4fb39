"""Export fine-tuning pairs with binarized targets.

Each judged (query, product) pair becomes one JSON line holding the
rendered prompt and a target token: ``"true"`` for exact matches and
``"false"`` for every other label. No sampling or rebalancing is applied;
the export is the raw judged set.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .catalog import Catalog, EsciLabel, QueryJudgments
from .documents import build_document
from .prompts import LengthBudget, render

log = logging.getLogger(__name__)

POSITIVE_TOKEN = "true"
NEGATIVE_TOKEN = "false"


@dataclass(frozen=True)
class TrainExample:
    input_text: str
    target_token: str
    source_task: str
    query_id: str
    product_id: str


def binarize(label: EsciLabel) -> str:
    """Map exact to the positive token and every other label to the negative."""
    return POSITIVE_TOKEN if label is EsciLabel.EXACT else NEGATIVE_TOKEN


def build_examples(
    catalog: Catalog,
    judgments_by_task: Mapping[str, Sequence[QueryJudgments]],
    budget: LengthBudget,
) -> list[TrainExample]:
    """Render one example per resolvable judgment, deterministically ordered.

    Judgments whose product is missing from the catalog are skipped with a
    warning. Output order is (query_id, product_id, source_task).
    """
    examples: list[TrainExample] = []
    for task in judgments_by_task:
        for query in judgments_by_task[task]:
            for product_id, label in query.judgments:
                product = catalog.resolve(product_id, query.locale)
                if product is None:
                    log.warning(
                        "skipping unresolvable product %r (locale %r) for query %r",
                        product_id, query.locale, query.query_id,
                    )
                    continue
                prompt = render(
                    query.query_text, build_document(product), budget,
                    query_id=query.query_id,
                )
                examples.append(
                    TrainExample(
                        input_text=prompt.text,
                        target_token=binarize(label),
                        source_task=task,
                        query_id=query.query_id,
                        product_id=product_id,
                    )
                )
    examples.sort(key=lambda ex: (ex.query_id, ex.product_id, ex.source_task))
    return examples


def export_training(
    catalog: Catalog,
    judgments_by_task: Mapping[str, Sequence[QueryJudgments]],
    budget: LengthBudget,
    path: str | Path,
) -> int:
    """Write examples as JSON lines; returns the number of lines written."""
    examples = build_examples(catalog, judgments_by_task, budget)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for example in examples:
            record = {
                "input": example.input_text,
                "target": example.target_token,
                "query_id": example.query_id,
                "product_id": example.product_id,
                "source_task": example.source_task,
            }
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
    return len(examples)
