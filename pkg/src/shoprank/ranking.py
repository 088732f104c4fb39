"""Turn scored pairs into per-query rankings and serialized run files.

Rankings are deterministic: descending score first, then ascending
product_id in byte order for ties. Run files use TREC-style lines
``query_id Q0 product_id rank score run_tag`` with ranks starting at 1 and
scores fixed at six decimal places; queries are written in ascending
query_id order. Serialization canonicalizes ordering at the written
precision, so a file always reads back cleanly and round-trips exactly for
rankings whose scores carry at most six decimals.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence
import csv

from .errors import ShopRankError
from .scoring import EmptyBatch, ScoredPair


class MixedQueryIds(ShopRankError):
    def __init__(self, query_ids: Iterable[str]):
        super().__init__(f"pairs span multiple query_ids: {sorted(set(query_ids))}")


class DuplicateProduct(ShopRankError):
    def __init__(self, product_id: str):
        self.product_id = product_id
        super().__init__(f"duplicate product_id in ranking: {product_id!r}")


class MalformedLine(ShopRankError):
    def __init__(self, line_no: int, cause: str):
        self.line_no = line_no
        super().__init__(f"malformed run line {line_no}: {cause}")


def _byte_key(value: str) -> bytes:
    return value.encode("utf-8")


def _quantize(score: float) -> float:
    return float(f"{score:.6f}")


@dataclass(frozen=True)
class Ranking:
    """Ordered (product_id, score) list for one query, best first."""

    query_id: str
    entries: tuple[tuple[str, float], ...]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        previous: tuple[float, bytes] | None = None
        for product_id, score in self.entries:
            if product_id in seen:
                raise DuplicateProduct(product_id)
            seen.add(product_id)
            if previous is not None:
                prev_score, prev_key = previous
                if score > prev_score:
                    raise ValueError(
                        f"ranking for query {self.query_id!r} has increasing scores"
                    )
                if score == prev_score and _byte_key(product_id) < prev_key:
                    raise ValueError(
                        f"ranking for query {self.query_id!r} breaks ties out of id order"
                    )
            previous = (score, _byte_key(product_id))

    @property
    def product_ids(self) -> tuple[str, ...]:
        return tuple(product_id for product_id, _ in self.entries)


@dataclass(frozen=True)
class RunFile:
    """A tagged set of rankings, canonically sorted by query_id."""

    run_tag: str
    rankings: tuple[Ranking, ...]

    def __post_init__(self) -> None:
        query_ids = [ranking.query_id for ranking in self.rankings]
        if len(set(query_ids)) != len(query_ids):
            raise ValueError("run file has more than one ranking for a query_id")
        ordered = tuple(sorted(self.rankings, key=lambda r: _byte_key(r.query_id)))
        object.__setattr__(self, "rankings", ordered)


def rank_query(pairs: Sequence[ScoredPair]) -> Ranking:
    """Order one query's scored pairs: score descending, ties by product_id.

    All pairs must share a query_id and products must be unique; the result
    is a permutation of the input products, independent of input order.
    """
    if not pairs:
        raise EmptyBatch()
    query_ids = {pair.query_id for pair in pairs}
    if len(query_ids) > 1:
        raise MixedQueryIds(query_ids)
    seen: set[str] = set()
    for pair in pairs:
        if pair.product_id in seen:
            raise DuplicateProduct(pair.product_id)
        seen.add(pair.product_id)
    ordered = sorted(pairs, key=lambda p: (-p.score.value, _byte_key(p.product_id)))
    return Ranking(
        query_id=next(iter(query_ids)),
        entries=tuple((pair.product_id, pair.score.value) for pair in ordered),
    )


def _writable_token(value: str, what: str) -> str:
    if value == "" or any(ch.isspace() for ch in value):
        raise ValueError(f"{what} {value!r} cannot be written to a whitespace-delimited run file")
    return value


def write_run(run: RunFile, path: str | Path) -> None:
    """Write TREC-style lines, canonicalizing order at six-decimal precision."""
    tag = _writable_token(run.run_tag, "run_tag")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for ranking in run.rankings:
            query_id = _writable_token(ranking.query_id, "query_id")
            quantized = [
                (_quantize(score), _writable_token(product_id, "product_id"))
                for product_id, score in ranking.entries
            ]
            quantized.sort(key=lambda item: (-item[0], _byte_key(item[1])))
            for rank, (score, product_id) in enumerate(quantized, start=1):
                handle.write(f"{query_id} Q0 {product_id} {rank} {score:.6f} {tag}\n")


def read_run(path: str | Path) -> RunFile:
    """Parse and validate a run file written by :func:`write_run`.

    Any structural defect raises :class:`MalformedLine` with the offending
    line number: wrong field count, a rank gap, out-of-order scores or
    ties, duplicate products, mixed run tags, or a query block that
    restarts after another query began.
    """
    run_tag: str | None = None
    finished: dict[str, Ranking] = {}
    current_query: str | None = None
    current_entries: list[tuple[str, float]] = []

    def finish_current() -> None:
        nonlocal current_query, current_entries
        if current_query is not None:
            finished[current_query] = Ranking(current_query, tuple(current_entries))
        current_query = None
        current_entries = []

    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            stripped = line.rstrip("\n")
            if stripped == "":
                raise MalformedLine(line_no, "empty line")
            fields = stripped.split(" ")
            if len(fields) != 6:
                raise MalformedLine(line_no, f"expected 6 fields, got {len(fields)}")
            query_id, marker, product_id, rank_text, score_text, tag = fields
            if marker != "Q0":
                raise MalformedLine(line_no, f"expected literal 'Q0', got {marker!r}")
            try:
                rank = int(rank_text)
            except ValueError:
                raise MalformedLine(line_no, f"rank {rank_text!r} is not an integer") from None
            try:
                score = float(score_text)
            except ValueError:
                raise MalformedLine(line_no, f"score {score_text!r} is not a number") from None
            if run_tag is None:
                run_tag = tag
            elif tag != run_tag:
                raise MalformedLine(line_no, f"run_tag {tag!r} != {run_tag!r}")
            if query_id != current_query:
                if query_id in finished:
                    raise MalformedLine(line_no, f"query {query_id!r} restarts a finished block")
                finish_current()
                current_query = query_id
            expected_rank = len(current_entries) + 1
            if rank != expected_rank:
                raise MalformedLine(line_no, f"rank {rank}, expected {expected_rank}")
            if any(product_id == existing for existing, _ in current_entries):
                raise MalformedLine(line_no, f"duplicate product {product_id!r}")
            if current_entries:
                prev_id, prev_score = current_entries[-1]
                if score > prev_score:
                    raise MalformedLine(line_no, "score increases down the ranking")
                if score == prev_score and _byte_key(product_id) < _byte_key(prev_id):
                    raise MalformedLine(line_no, "tie is not in ascending product_id order")
            current_entries.append((product_id, score))
    finish_current()
    return RunFile(run_tag=run_tag or "", rankings=tuple(finished.values()))


def write_submission(run: RunFile, path: str | Path) -> None:
    """Write the competition submission CSV: ranked products per query.

    Queries appear in ascending query_id order, products in ranked order,
    under a ``query_id,product_id`` header. An empty run yields a
    header-only file.
    """
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["query_id", "product_id"])
        for ranking in run.rankings:
            quantized = [
                (_quantize(score), product_id) for product_id, score in ranking.entries
            ]
            quantized.sort(key=lambda item: (-item[0], _byte_key(item[1])))
            for _, product_id in quantized:
                writer.writerow([ranking.query_id, product_id])
