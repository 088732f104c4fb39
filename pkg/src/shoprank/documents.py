"""Turn catalog products into clean document text.

Cleaning follows a fixed, reproducible rule set rather than a full HTML
parser: well-formed tags are removed, ``script``/``style`` elements are
dropped with their contents, a small set of entities is decoded, the block
tags ``p``/``br``/``li``/``div``/``tr`` become a single space, and the
result is whitespace-collapsed. Malformed markup degrades gracefully: a
``<`` that never closes, or that is not followed by a tag name, stays in
the text as a literal character.

The rule set is applied repeatedly until the text stops changing, which
makes :func:`strip_html` idempotent even for inputs like ``&amp;nbsp;``
whose first cleaning pass uncovers more work. No pass ever lengthens the
text, and any tag or entity edit strictly shortens it, so the iteration
always terminates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .catalog import Product

# Tags replaced by a single space; every other tag is removed outright.
_BLOCK_TAGS = frozenset({"p", "br", "li", "div", "tr"})

# Elements whose contents are dropped entirely.
_DROP_CONTENT_TAGS = frozenset({"script", "style"})

_NAMED_ENTITIES = {
    "amp": "&",
    "lt": "<",
    "gt": ">",
    "quot": '"',
    "nbsp": " ",
}

_TAG_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")
_NAMED_ENTITY_RE = re.compile(r"&([A-Za-z]+);")
_NUMERIC_ENTITY_RE = re.compile(r"&#(?:x([0-9A-Fa-f]+)|([0-9]+));")


@dataclass(frozen=True)
class DocumentText:
    """Cleaned, whitespace-normalized text for one product."""

    product_id: str
    text: str


def _find_closing(text: str, tag: str, start: int) -> int | None:
    """Index just past ``</tag ...>`` at or after ``start``, or None."""
    match = re.compile(rf"</\s*{tag}\b[^>]*>", re.IGNORECASE).search(text, start)
    return match.end() if match else None


def _clean_once(raw: str) -> str:
    out: list[str] = []
    i = 0
    n = len(raw)
    while i < n:
        ch = raw[i]
        if ch == "<":
            nxt = raw[i + 1] if i + 1 < n else ""
            if nxt == "!":
                # Comment or declaration.
                if raw.startswith("<!--", i):
                    end = raw.find("-->", i + 4)
                    if end != -1:
                        i = end + 3
                        continue
                end = raw.find(">", i + 1)
                if end == -1:
                    out.append(ch)
                    i += 1
                    continue
                i = end + 1
                continue
            name_start = i + 2 if nxt == "/" else i + 1
            name_match = _TAG_NAME_RE.match(raw, name_start)
            if name_match is None:
                # Not a tag: keep the '<' literal.
                out.append(ch)
                i += 1
                continue
            end = raw.find(">", i + 1)
            if end == -1:
                # Unclosed tag start: keep the '<' literal.
                out.append(ch)
                i += 1
                continue
            name = name_match.group(0).lower()
            closing = nxt == "/"
            if not closing and name in _DROP_CONTENT_TAGS:
                past = _find_closing(raw, name, end + 1)
                # Unterminated script/style swallows the rest of the text.
                i = past if past is not None else n
                continue
            if name in _BLOCK_TAGS:
                out.append(" ")
            i = end + 1
        elif ch == "&":
            named = _NAMED_ENTITY_RE.match(raw, i)
            if named is not None:
                decoded = _NAMED_ENTITIES.get(named.group(1).lower())
                if decoded is not None:
                    out.append(decoded)
                    i = named.end()
                    continue
                out.append(named.group(0))
                i = named.end()
                continue
            numeric = _NUMERIC_ENTITY_RE.match(raw, i)
            if numeric is not None:
                hex_digits, dec_digits = numeric.groups()
                codepoint = int(hex_digits, 16) if hex_digits else int(dec_digits)
                # Only ASCII printable references are decoded.
                if 0x20 <= codepoint <= 0x7E:
                    out.append(chr(codepoint))
                else:
                    out.append(numeric.group(0))
                i = numeric.end()
                continue
            out.append(ch)
            i += 1
        else:
            out.append(ch)
            i += 1
    return " ".join("".join(out).split())


def strip_html(raw: str) -> str:
    """Clean markup out of ``raw`` per the module's pinned rule set."""
    prev = raw
    while True:
        cur = _clean_once(prev)
        if cur == prev:
            return cur
        prev = cur


def build_document(product: Product) -> DocumentText:
    """Concatenate the product's five text fields into one cleaned string.

    Field order is fixed: title, description, bullet points, brand, color.
    Absent fields are skipped without doubling separators; a product with
    no text at all yields the empty string.
    """
    fields = (
        product.title,
        product.description,
        product.bullet_points,
        product.brand,
        product.color_name,
    )
    parts = [strip_html(value) for value in fields if value is not None]
    text = " ".join(part for part in parts if part)
    return DocumentText(product_id=product.product_id, text=text)
