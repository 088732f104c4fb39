"""Render scoring prompts and keep them inside a length budget.

The input template is fixed::

    Query: {query} Document: {document} Relevant:

Only the document part may be shortened to fit the budget; the query and
the template markers are never touched. Budgets are pluggable because the
true limit is tokenizer-specific; :func:`default_length_fn` is a model-free
proxy (whitespace runs plus a crude CJK correction) with a default cap of
512 units.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .documents import DocumentText
from .errors import ShopRankError

QUERY_MARKER = "Query: "
DOCUMENT_MARKER = " Document: "
RELEVANT_MARKER = " Relevant:"

# Codepoint ranges counted as CJK for the default length proxy.
_CJK_RANGES = (
    (0x3040, 0x30FF),  # hiragana + katakana
    (0x3400, 0x4DBF),  # CJK extension A
    (0x4E00, 0x9FFF),  # CJK unified ideographs
    (0xAC00, 0xD7AF),  # hangul syllables
    (0xF900, 0xFAFF),  # CJK compatibility ideographs
    (0xFF66, 0xFF9D),  # halfwidth katakana
)


class MalformedPromptText(ShopRankError):
    """Text does not follow the prompt template."""


def default_length_fn(text: str) -> int:
    """Count whitespace-delimited runs plus ceil(CJK codepoints / 4).

    CJK scripts rarely use spaces, so run counting alone undercounts them;
    the correction charges one unit per four CJK codepoints.
    """
    runs = len(text.split())
    cjk = sum(1 for ch in text if any(lo <= ord(ch) <= hi for lo, hi in _CJK_RANGES))
    return runs + (-(-cjk // 4))


@dataclass(frozen=True)
class LengthBudget:
    """Cap on prompt length in units of a pluggable counting function.

    The counting function must map the empty string to 0 and be monotone
    under concatenation.
    """

    max_units: int = 512
    length_fn: Callable[[str], int] = field(default=default_length_fn)

    def __post_init__(self) -> None:
        if self.max_units < 1:
            raise ValueError(f"max_units must be positive, got {self.max_units}")


@dataclass(frozen=True)
class Prompt:
    """One rendered (query, document) input string."""

    query_id: str
    product_id: str
    text: str
    truncated: bool


def _template(query_text: str, document_text: str) -> str:
    return f"{QUERY_MARKER}{query_text}{DOCUMENT_MARKER}{document_text}{RELEVANT_MARKER}"


def render(query_text: str, doc: DocumentText, budget: LengthBudget,
           query_id: str = "") -> Prompt:
    """Render the prompt for one pair, truncating the document to fit.

    The document is cut back to its longest whole-word prefix that keeps
    the full prompt inside the budget. If even the empty-document prompt is
    over budget it is returned anyway, flagged as truncated; the query is
    never shortened.
    """
    full = _template(query_text, doc.text)
    if budget.length_fn(full) <= budget.max_units:
        return Prompt(query_id=query_id, product_id=doc.product_id,
                      text=full, truncated=False)
    words = doc.text.split(" ") if doc.text else []
    for keep in range(len(words) - 1, 0, -1):
        candidate = _template(query_text, " ".join(words[:keep]))
        if budget.length_fn(candidate) <= budget.max_units:
            return Prompt(query_id=query_id, product_id=doc.product_id,
                          text=candidate, truncated=True)
    return Prompt(query_id=query_id, product_id=doc.product_id,
                  text=_template(query_text, ""), truncated=True)


def parse_prompt(text: str) -> tuple[str, str]:
    """Recover (query, document) from a rendered prompt.

    Splits on the first document marker, so the query is recovered exactly
    whenever it contains none of the template markers.
    """
    if not text.startswith(QUERY_MARKER):
        raise MalformedPromptText(f"prompt does not start with {QUERY_MARKER!r}")
    if not text.endswith(RELEVANT_MARKER):
        raise MalformedPromptText(f"prompt does not end with {RELEVANT_MARKER!r}")
    body = text[len(QUERY_MARKER):len(text) - len(RELEVANT_MARKER)]
    query, sep, document = body.partition(DOCUMENT_MARKER)
    if not sep:
        raise MalformedPromptText(f"prompt has no {DOCUMENT_MARKER!r} marker")
    return query, document
