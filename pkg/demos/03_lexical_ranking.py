"""Score prompts with the lexical baseline and write ranking files.

Every scorer returns two logits per (query, document) pair, and the
relevance score is the positive side of their softmax. The lexical
baseline counts deduplicated query terms found in the document
(logit_pos = ln(1 + hits), logit_neg = ln(1 + misses)); it needs no
model or network and gives the whole pipeline a deterministic
dry-run path. Rankings sort by score descending with byte-order
product-id tie-breaks, then serialize as a TREC-style run file and a
two-column submission CSV.
"""

import tempfile
from pathlib import Path

from shoprank import (
    DocumentText,
    LengthBudget,
    LexicalScorer,
    RunFile,
    lexical_logits,
    rank_query,
    render,
    score_batch,
    write_run,
    write_submission,
)

budget = LengthBudget()
docs = {
    "B1": "red canvas shoe with rubber sole",
    "B2": "blue wool winter hat",
    "B3": "red shoe polish kit",
}
prompts = [
    render("red shoe", DocumentText(pid, text), budget, query_id="q1")
    for pid, text in docs.items()
]

scored = score_batch(LexicalScorer(), prompts)
print("lexical scores for query 'red shoe':")
for pair, (pid, text) in zip(scored, docs.items()):
    logits = lexical_logits("red shoe", text)
    print(f"  {pair.product_id}: logits=({logits.logit_pos:.4f}, "
          f"{logits.logit_neg:.4f}) score={pair.score.value:.6f}")

ranking = rank_query(scored)
print()
print("ranked:", " > ".join(pid for pid, _ in ranking.entries))

run = RunFile(run_tag="demo", rankings=(ranking,))
out = Path(tempfile.mkdtemp(prefix="shoprank_demo_"))
write_run(run, out / "run.trec")
write_submission(run, out / "submission.csv")

print()
print(f"run file ({out / 'run.trec'}):")
print((out / "run.trec").read_text(), end="")
print()
print(f"submission ({out / 'submission.csv'}):")
print((out / "submission.csv").read_text(), end="")
