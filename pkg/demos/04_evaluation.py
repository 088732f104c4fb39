"""How rankings are graded: nDCG@k with a label-to-gain map.

Each judged product contributes gain / log2(rank + 1); the sum over the
produced order (DCG) is divided by the sum over the best possible order
(ideal DCG). Default gains are Exact=1.0, Substitute=0.1,
Complement=0.01, Irrelevant=0.0, so putting an Irrelevant item above an
Exact one costs dearly while swapping two Substitutes costs nothing.
"""

import math

from shoprank import (
    EsciLabel,
    GainMap,
    QueryJudgments,
    Ranking,
    RunFile,
    evaluate_run,
    ndcg_at_k,
)

judged = QueryJudgments(
    query_id="q1", query_text="espresso maker", locale="us",
    judgments=(
        ("B1", EsciLabel.EXACT),
        ("B2", EsciLabel.IRRELEVANT),
        ("B3", EsciLabel.SUBSTITUTE),
    ),
)
gains = GainMap()

ranking = Ranking("q1", (("B1", 0.9), ("B2", 0.5), ("B3", 0.4)))
print("produced order: B1 (Exact), B2 (Irrelevant), B3 (Substitute)")
dcg = 1.0 / math.log2(2) + 0.0 / math.log2(3) + 0.1 / math.log2(4)
ideal = 1.0 / math.log2(2) + 0.1 / math.log2(3) + 0.0 / math.log2(4)
print(f"  DCG   = 1.0/log2(2) + 0.0/log2(3) + 0.1/log2(4) = {dcg:.6f}")
print(f"  ideal = 1.0/log2(2) + 0.1/log2(3) + 0.0/log2(4) = {ideal:.6f}")
print(f"  nDCG@3 = {dcg / ideal:.6f}")
print(f"  ndcg_at_k agrees: {ndcg_at_k(ranking, judged, gains, 3):.6f}")
print()

perfect = Ranking("q1", (("B1", 0.9), ("B3", 0.5), ("B2", 0.4)))
print(f"gain-sorted order scores {ndcg_at_k(perfect, judged, gains, 3):.6f}")
print()

run = RunFile(run_tag="demo", rankings=(ranking,))
report = evaluate_run(run, [judged], gains, k=20)
print("evaluate_run aggregates per-query scores into a report:")
print(report.to_json(), end="")
print()
print("Queries judged but absent from the run are listed and excluded;")
print("queries whose judgments carry zero total gain score 0.0 by")
print("default, or are skipped entirely with skip_zero=True.")
