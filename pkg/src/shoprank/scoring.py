"""Relevance scoring: two-token logits, the softmax reduction, and scorers.

A scorer turns prompts into ``(logit_pos, logit_neg)`` pairs; the final
relevance score is the softmax probability of the positive token, computed
here in one audited place so remote servers only ever ship raw logits.
Scorers must be pure per prompt text: the same text yields the same logits
within a session.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol, Sequence

from .errors import ShopRankError
from .prompts import Prompt, parse_prompt


class NonFiniteLogit(ShopRankError):
    def __init__(self, detail: str = "logits must be finite"):
        super().__init__(detail)


class EmptyBatch(ShopRankError):
    def __init__(self) -> None:
        super().__init__("cannot score an empty prompt batch")


class ScorerContractViolation(ShopRankError):
    """A scorer returned a result that does not line up with its input."""


@dataclass(frozen=True)
class TokenLogits:
    """Raw logits of the positive ("true"/"yes") and negative tokens."""

    logit_pos: float
    logit_neg: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.logit_pos) and math.isfinite(self.logit_neg)):
            raise NonFiniteLogit(
                f"logits must be finite, got ({self.logit_pos}, {self.logit_neg})"
            )


@dataclass(frozen=True)
class RelevanceScore:
    """Probability of the positive token, in [0, 1]."""

    value: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.value <= 1.0):
            raise ValueError(f"relevance score out of range: {self.value}")


@dataclass(frozen=True)
class ScoredPair:
    query_id: str
    product_id: str
    score: RelevanceScore
    scorer_tag: str

    def __post_init__(self) -> None:
        if not self.query_id or not self.product_id:
            raise ValueError("scored pair requires non-empty query_id and product_id")


def softmax_pos(logits: TokenLogits) -> RelevanceScore:
    """Two-way softmax probability of the positive logit.

    The max logit is subtracted before exponentiation, so extreme values
    (|logit| in the thousands) neither overflow nor underflow.
    """
    top = max(logits.logit_pos, logits.logit_neg)
    exp_pos = math.exp(logits.logit_pos - top)
    exp_neg = math.exp(logits.logit_neg - top)
    return RelevanceScore(exp_pos / (exp_pos + exp_neg))


class Scorer(Protocol):
    """Contract for anything that maps prompts to token logits.

    Implementations must return one logits pair per prompt, aligned with
    input order, and must be pure per prompt text.
    """

    tag: str

    def logits_for(self, prompts: Sequence[Prompt]) -> list[TokenLogits]: ...


def lexical_logits(query_text: str, document_text: str) -> TokenLogits:
    """Deterministic term-overlap logits, a model-free scorer stand-in.

    Query terms are lowercased, whitespace-split, and deduplicated;
    ``logit_pos = ln(1 + overlap)`` counts terms found in the document's
    term set and ``logit_neg = ln(1 + miss)`` counts the rest.
    """
    query_terms = set(query_text.lower().split())
    document_terms = set(document_text.lower().split())
    overlap = len(query_terms & document_terms)
    miss = len(query_terms) - overlap
    return TokenLogits(math.log(1 + overlap), math.log(1 + miss))


class LexicalScorer:
    """Scorer built on :func:`lexical_logits`; recovers (q, d) from the prompt."""

    tag = "lexical"

    def logits_for(self, prompts: Sequence[Prompt]) -> list[TokenLogits]:
        return [lexical_logits(*parse_prompt(prompt.text)) for prompt in prompts]


def score_batch(scorer: Scorer, prompts: Sequence[Prompt]) -> list[ScoredPair]:
    """Score prompts through ``scorer``, order-aligned with the input.

    Raises :class:`EmptyBatch` for an empty input and re-raises scorer
    failures (for remote scorers that includes unavailability). A logits
    list that does not match the input length is a contract violation.
    """
    if not prompts:
        raise EmptyBatch()
    prompt_list = list(prompts)
    try:
        logits = scorer.logits_for(prompt_list)
    except NonFiniteLogit as exc:
        raise NonFiniteLogit(f"scorer {scorer.tag!r} produced non-finite logits: {exc}") from exc
    if len(logits) != len(prompt_list):
        raise ScorerContractViolation(
            f"scorer {scorer.tag!r} returned {len(logits)} results for {len(prompt_list)} prompts"
        )
    return [
        ScoredPair(
            query_id=prompt.query_id,
            product_id=prompt.product_id,
            score=softmax_pos(pair_logits),
            scorer_tag=scorer.tag,
        )
        for prompt, pair_logits in zip(prompt_list, logits)
    ]
