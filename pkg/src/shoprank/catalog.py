"""Data model and CSV ingestion for shopping-queries style datasets.

A catalog is a set of products keyed by ``(product_id, locale)`` plus a
list of judged queries. Products reuse ids across locales in the public
datasets, so the locale is part of the key. Everything is immutable after
ingestion; reads are safe under concurrent access.

Absent and empty text fields are unified: a cell that is empty or
whitespace-only loads as ``None``. Judgments that reference products
missing from the catalog are retained and reported by :func:`validate`
rather than dropped, so partial catalogs degrade softly downstream.
"""

from __future__ import annotations

import csv
import enum
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import ShopRankError

PRODUCT_COLUMNS = (
    "product_id",
    "product_locale",
    "product_title",
    "product_description",
    "product_bullet_point",
    "product_brand",
    "product_color_name",
)

JUDGMENT_COLUMNS = ("query_id", "query", "query_locale", "product_id", "esci_label")


class CatalogError(ShopRankError):
    """Base class for ingestion and validation errors."""


class MissingColumn(CatalogError):
    def __init__(self, column: str, path: str | Path):
        self.column = column
        super().__init__(f"missing required column {column!r} in {path}")


class DuplicateProductId(CatalogError):
    def __init__(self, product_id: str, locale: str, row: int):
        self.product_id = product_id
        self.locale = locale
        super().__init__(
            f"duplicate product_id {product_id!r} for locale {locale!r} at row {row}"
        )


class MalformedRow(CatalogError):
    def __init__(self, row: int, cause: str):
        self.row = row
        self.cause = cause
        super().__init__(f"malformed row {row}: {cause}")


class UnknownLabel(CatalogError):
    def __init__(self, value: str, row: int):
        self.value = value
        self.row = row
        super().__init__(f"unknown relevance label {value!r} at row {row}")


class ConflictingQueryText(CatalogError):
    def __init__(self, query_id: str, row: int, detail: str):
        self.query_id = query_id
        super().__init__(f"conflicting data for query_id {query_id!r} at row {row}: {detail}")


class DuplicateJudgment(CatalogError):
    def __init__(self, query_id: str, product_id: str, row: int):
        self.query_id = query_id
        self.product_id = product_id
        super().__init__(
            f"duplicate judgment for product {product_id!r} under query {query_id!r} at row {row}"
        )


class EsciLabel(enum.Enum):
    """Four-way relevance taxonomy used by shopping-queries judgments."""

    EXACT = "exact"
    SUBSTITUTE = "substitute"
    COMPLEMENT = "complement"
    IRRELEVANT = "irrelevant"

    @classmethod
    def parse(cls, raw: str) -> EsciLabel:
        """Parse a label, case-insensitively, from full names or E/S/C/I codes."""
        key = raw.strip().lower()
        if key in _LABEL_ALIASES:
            return _LABEL_ALIASES[key]
        raise ValueError(f"not a relevance label: {raw!r}")


_LABEL_ALIASES: dict[str, EsciLabel] = {}
for _label in EsciLabel:
    _LABEL_ALIASES[_label.value] = _label
    _LABEL_ALIASES[_label.value[0]] = _label


@dataclass(frozen=True)
class Product:
    """One catalog record. Text fields are ``None`` when absent."""

    product_id: str
    locale: str
    title: str | None = None
    description: str | None = None
    bullet_points: str | None = None
    brand: str | None = None
    color_name: str | None = None


@dataclass(frozen=True)
class QueryJudgments:
    """A query plus its judged products, in file order."""

    query_id: str
    query_text: str
    locale: str
    judgments: tuple[tuple[str, EsciLabel], ...]


@dataclass(frozen=True)
class Catalog:
    """Immutable products-plus-queries bundle."""

    products: Mapping[tuple[str, str], Product] = field(default_factory=dict)
    queries: tuple[QueryJudgments, ...] = ()

    def resolve(self, product_id: str, locale: str) -> Product | None:
        return self.products.get((product_id, locale))


@dataclass(frozen=True)
class ValidationReport:
    """Deterministic summary of catalog consistency.

    ``missing_products`` lists every judged reference that does not resolve
    to a product in the query's locale, as ``(query_id, product_id)`` pairs
    sorted lexicographically.
    """

    missing_products: tuple[tuple[str, str], ...]
    products_per_locale: Mapping[str, int]
    judgments_per_locale: Mapping[str, int]
    label_counts: Mapping[EsciLabel, int]

    def to_text(self) -> str:
        lines = ["catalog validation report"]
        lines.append(f"  products: {sum(self.products_per_locale.values())}")
        for locale in sorted(self.products_per_locale):
            lines.append(f"    locale {locale}: {self.products_per_locale[locale]}")
        lines.append(f"  judgments: {sum(self.judgments_per_locale.values())}")
        for locale in sorted(self.judgments_per_locale):
            lines.append(f"    locale {locale}: {self.judgments_per_locale[locale]}")
        for label in EsciLabel:
            lines.append(f"    label {label.value}: {self.label_counts.get(label, 0)}")
        lines.append(f"  unresolved judged products: {len(self.missing_products)}")
        for query_id, product_id in self.missing_products:
            lines.append(f"    query {query_id}: {product_id}")
        return "\n".join(lines)


def _none_if_blank(value: str | None) -> str | None:
    if value is None or value.strip() == "":
        return None
    return value


def _open_reader(path: str | Path, required: Sequence[str]) -> tuple[csv.DictReader, object]:
    handle = open(path, newline="", encoding="utf-8")
    reader = csv.DictReader(handle)
    header = reader.fieldnames or []
    for column in required:
        if column not in header:
            handle.close()
            raise MissingColumn(column, path)
    return reader, handle


def load_products(path: str | Path, fmt: str = "csv") -> dict[tuple[str, str], Product]:
    """Load a products CSV into a catalog fragment keyed by (id, locale).

    Rows with an empty product_id or locale are rejected with row-number
    diagnostics; duplicate (product_id, locale) keys are an error.
    """
    if fmt != "csv":
        raise ValueError(f"unsupported products format: {fmt!r}")
    reader, handle = _open_reader(path, ("product_id", "product_locale"))
    products: dict[tuple[str, str], Product] = {}
    with handle:
        for row_no, row in enumerate(reader, start=2):
            product_id = (row.get("product_id") or "").strip()
            locale = (row.get("product_locale") or "").strip()
            if not product_id:
                raise MalformedRow(row_no, "empty product_id")
            if not locale:
                raise MalformedRow(row_no, "empty product_locale")
            key = (product_id, locale)
            if key in products:
                raise DuplicateProductId(product_id, locale, row_no)
            products[key] = Product(
                product_id=product_id,
                locale=locale,
                title=_none_if_blank(row.get("product_title")),
                description=_none_if_blank(row.get("product_description")),
                bullet_points=_none_if_blank(row.get("product_bullet_point")),
                brand=_none_if_blank(row.get("product_brand")),
                color_name=_none_if_blank(row.get("product_color_name")),
            )
    return products


def load_judgments(path: str | Path) -> list[QueryJudgments]:
    """Load a judgments CSV, grouped by query_id.

    Queries come back in first-seen file order and each query's products
    keep their file order. A query_id must carry one consistent query text
    and locale across its rows.
    """
    reader, handle = _open_reader(path, JUDGMENT_COLUMNS)
    order: list[str] = []
    texts: dict[str, str] = {}
    locales: dict[str, str] = {}
    grouped: dict[str, list[tuple[str, EsciLabel]]] = {}
    with handle:
        for row_no, row in enumerate(reader, start=2):
            query_id = (row.get("query_id") or "").strip()
            if not query_id:
                raise MalformedRow(row_no, "empty query_id")
            product_id = (row.get("product_id") or "").strip()
            if not product_id:
                raise MalformedRow(row_no, "empty product_id")
            locale = (row.get("query_locale") or "").strip()
            if not locale:
                raise MalformedRow(row_no, "empty query_locale")
            query_text = row.get("query") or ""
            raw_label = row.get("esci_label") or ""
            try:
                label = EsciLabel.parse(raw_label)
            except ValueError:
                raise UnknownLabel(raw_label, row_no) from None
            if query_id not in grouped:
                order.append(query_id)
                texts[query_id] = query_text
                locales[query_id] = locale
                grouped[query_id] = []
            else:
                if texts[query_id] != query_text:
                    raise ConflictingQueryText(
                        query_id, row_no, f"query text {query_text!r} != {texts[query_id]!r}"
                    )
                if locales[query_id] != locale:
                    raise ConflictingQueryText(
                        query_id, row_no, f"locale {locale!r} != {locales[query_id]!r}"
                    )
            if any(product_id == seen for seen, _ in grouped[query_id]):
                raise DuplicateJudgment(query_id, product_id, row_no)
            grouped[query_id].append((product_id, label))
    return [
        QueryJudgments(
            query_id=query_id,
            query_text=texts[query_id],
            locale=locales[query_id],
            judgments=tuple(grouped[query_id]),
        )
        for query_id in order
    ]


def save_products(products: Mapping[tuple[str, str], Product], path: str | Path) -> None:
    """Write products back out in the ingestion CSV schema (absent fields as empty cells).

    Rows end with CRLF so that embedded CR/LF in text fields always gets
    quoted and the load/save cycle round-trips byte-exactly.
    """
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(PRODUCT_COLUMNS)
        for key in sorted(products, key=lambda k: (k[1], k[0])):
            product = products[key]
            writer.writerow(
                [
                    product.product_id,
                    product.locale,
                    product.title or "",
                    product.description or "",
                    product.bullet_points or "",
                    product.brand or "",
                    product.color_name or "",
                ]
            )


def save_judgments(queries: Iterable[QueryJudgments], path: str | Path) -> None:
    """Write judgments back out in the ingestion CSV schema (CRLF rows, see save_products)."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(JUDGMENT_COLUMNS)
        for query in queries:
            for product_id, label in query.judgments:
                writer.writerow(
                    [query.query_id, query.query_text, query.locale, product_id, label.value]
                )


def validate(catalog: Catalog) -> ValidationReport:
    """Report dangling judged products and per-locale / per-label counts."""
    missing: list[tuple[str, str]] = []
    judgments_per_locale: Counter[str] = Counter()
    label_counts: Counter[EsciLabel] = Counter()
    for query in catalog.queries:
        for product_id, label in query.judgments:
            judgments_per_locale[query.locale] += 1
            label_counts[label] += 1
            if catalog.resolve(product_id, query.locale) is None:
                missing.append((query.query_id, product_id))
    products_per_locale: Counter[str] = Counter()
    for _, locale in catalog.products:
        products_per_locale[locale] += 1
    return ValidationReport(
        missing_products=tuple(sorted(missing)),
        products_per_locale=dict(products_per_locale),
        judgments_per_locale=dict(judgments_per_locale),
        label_counts=dict(label_counts),
    )
