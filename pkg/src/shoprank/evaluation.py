"""nDCG@k over four-way relevance judgments, per query and macro-averaged.

Gains are assigned per label through a configurable :class:`GainMap`; the
default (exact=1.0, substitute=0.1, complement=0.01, irrelevant=0.0) is
the usual product-ranking competition convention, not a universal fact.
Discounts use log base 2 with ranks starting at 1. Ranked products without
a judgment score zero gain; judged products missing from the ranking still
count toward the ideal ordering, so incomplete rankings are penalized
rather than hidden.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .catalog import EsciLabel, QueryJudgments
from .errors import ShopRankError
from .ranking import Ranking, RunFile

log = logging.getLogger(__name__)


class NegativeGain(ShopRankError):
    def __init__(self, value: float):
        super().__init__(f"gains must be non-negative, got {value}")


class QueryIdMismatch(ShopRankError):
    def __init__(self, ranking_id: str, judgments_id: str):
        super().__init__(
            f"ranking is for query {ranking_id!r} but judgments are for {judgments_id!r}"
        )


@dataclass(frozen=True)
class GainMap:
    """Per-label gains; must be non-increasing from exact down to irrelevant."""

    exact: float = 1.0
    substitute: float = 0.1
    complement: float = 0.01
    irrelevant: float = 0.0

    def __post_init__(self) -> None:
        chain = (self.exact, self.substitute, self.complement, self.irrelevant)
        if any(a < b for a, b in zip(chain, chain[1:])) or chain[-1] < 0.0:
            raise ValueError(f"gain map must satisfy exact >= substitute >= complement >= irrelevant >= 0, got {chain}")

    def gain(self, label: EsciLabel) -> float:
        return getattr(self, label.value)

    def as_dict(self) -> dict[str, float]:
        return {
            "exact": self.exact,
            "substitute": self.substitute,
            "complement": self.complement,
            "irrelevant": self.irrelevant,
        }


@dataclass(frozen=True)
class EvalReport:
    """Per-query nDCG values plus their unweighted mean.

    ``skipped`` counts queries left out of the average: those with no
    judgments at all plus, when ``skip_zero`` was set, those whose ideal
    ranking has zero gain. ``missing_judgments`` lists the former.
    """

    k: int
    gain_map: GainMap
    per_query: Mapping[str, float]
    macro_mean: float
    skipped: int
    missing_judgments: tuple[str, ...] = ()

    def to_json(self) -> str:
        payload = {
            "k": self.k,
            "gain_map": self.gain_map.as_dict(),
            "per_query": dict(self.per_query),
            "macro_mean": self.macro_mean,
            "skipped": self.skipped,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_report(report: EvalReport, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(report.to_json())


def dcg(gains_in_rank_order: Sequence[float], k: int) -> float:
    """Discounted cumulative gain truncated at rank ``k``.

    ``sum(gains[i] / log2(i + 1))`` for 1-based ranks ``i`` up to
    ``min(k, len(gains))``.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    total = 0.0
    for index, gain in enumerate(gains_in_rank_order[:k], start=1):
        if gain < 0.0:
            raise NegativeGain(gain)
        total += gain / math.log2(index + 1)
    return total


def ndcg_at_k(
    ranking: Ranking,
    judgments: QueryJudgments,
    gain_map: GainMap,
    k: int,
    *,
    skip_zero: bool = False,
) -> float | None:
    """nDCG@k of one ranking against its query's judgments.

    Returns ``None`` when the ideal DCG is zero and ``skip_zero`` is set
    (the query carries no signal); otherwise a zero-ideal query scores 0.0.
    """
    if ranking.query_id != judgments.query_id:
        raise QueryIdMismatch(ranking.query_id, judgments.query_id)
    gain_by_product = {
        product_id: gain_map.gain(label) for product_id, label in judgments.judgments
    }
    realized = [gain_by_product.get(product_id, 0.0) for product_id, _ in ranking.entries]
    ideal = sorted(gain_by_product.values(), reverse=True)
    ideal_dcg = dcg(ideal, k)
    if ideal_dcg == 0.0:
        return None if skip_zero else 0.0
    return dcg(realized, k) / ideal_dcg


def evaluate_run(
    run: RunFile,
    judgments: Sequence[QueryJudgments],
    gain_map: GainMap | None = None,
    k: int = 20,
    *,
    skip_zero: bool = False,
) -> EvalReport:
    """Evaluate every ranking in the run; queries without judgments are
    reported and excluded from the macro average."""
    gain_map = gain_map or GainMap()
    by_query = {query.query_id: query for query in judgments}
    per_query: dict[str, float] = {}
    missing: list[str] = []
    zero_skipped = 0
    for ranking in run.rankings:
        query = by_query.get(ranking.query_id)
        if query is None:
            log.warning("no judgments for query %r; excluded from evaluation", ranking.query_id)
            missing.append(ranking.query_id)
            continue
        value = ndcg_at_k(ranking, query, gain_map, k, skip_zero=skip_zero)
        if value is None:
            zero_skipped += 1
            continue
        per_query[ranking.query_id] = value
    macro = sum(per_query.values()) / len(per_query) if per_query else 0.0
    return EvalReport(
        k=k,
        gain_map=gain_map,
        per_query=per_query,
        macro_mean=macro,
        skipped=len(missing) + zero_skipped,
        missing_judgments=tuple(missing),
    )
