"""HTTP client for remote logit servers.

The wire protocol is JSON over HTTP. ``POST {endpoint}/v1/score`` takes
``{"pairs": [{"query": ..., "document": ...}, ...]}`` and returns
``{"logits": [{"logit_pos": f, "logit_neg": f}, ...]}`` with one entry per
request pair, in order. ``GET {endpoint}/v1/health`` returns
``{"status": "ok", "model": "<tag>"}``. A 503 means the server is
temporarily unavailable and the request is retried with exponential
backoff; a 400 means the request was malformed and is not retried.

Servers return raw logits only; the softmax reduction to a score happens
client-side in :mod:`shoprank.scoring`.
"""

from __future__ import annotations

import logging
import math
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import httpx

from .errors import ShopRankError
from .prompts import Prompt, parse_prompt
from .scoring import TokenLogits

log = logging.getLogger(__name__)

SCORE_PATH = "/v1/score"
HEALTH_PATH = "/v1/health"


class ScorerUnavailable(ShopRankError):
    """The endpoint could not serve the request after all retries."""


class ProtocolError(ShopRankError):
    """The server violated the wire protocol; retrying will not help."""


@dataclass(frozen=True)
class RetryEvent:
    batch_index: int
    attempt: int
    reason: str


@dataclass
class TransferStats:
    """Counters for one scoring call, mainly for tests and diagnostics."""

    batches: int = 0
    requests: int = 0
    retry_events: list[RetryEvent] = field(default_factory=list)


def _check_logits_payload(payload: object, expected: int) -> list[TokenLogits]:
    if not isinstance(payload, dict) or not isinstance(payload.get("logits"), list):
        raise ProtocolError("response body is not an object with a 'logits' list")
    items = payload["logits"]
    if len(items) != expected:
        raise ProtocolError(f"expected {expected} logits, server returned {len(items)}")
    out: list[TokenLogits] = []
    for index, item in enumerate(items):
        if not isinstance(item, dict):
            raise ProtocolError(f"logits entry {index} is not an object")
        pos = item.get("logit_pos")
        neg = item.get("logit_neg")
        if not isinstance(pos, (int, float)) or isinstance(pos, bool):
            raise ProtocolError(f"logits entry {index} has no numeric logit_pos")
        if not isinstance(neg, (int, float)) or isinstance(neg, bool):
            raise ProtocolError(f"logits entry {index} has no numeric logit_neg")
        if not (math.isfinite(pos) and math.isfinite(neg)):
            raise ProtocolError(f"non-finite logits in entry {index}: ({pos}, {neg})")
        out.append(TokenLogits(float(pos), float(neg)))
    return out


class RemoteScorer:
    """Batched scoring client implementing the ``Scorer`` contract.

    Prompts are split into batches of at most ``batch_size``; at most
    ``max_in_flight`` batches are outstanding at a time, and results are
    reassembled in input order regardless of completion order. Transient
    failures (connection errors, timeouts, 5xx) are retried up to
    ``retries`` times with exponential backoff (base 250 ms, factor 2,
    ±20% jitter by default).
    """

    tag = "remote"

    def __init__(
        self,
        endpoint: str,
        *,
        batch_size: int = 16,
        max_in_flight: int = 4,
        retries: int = 3,
        timeout: float = 30.0,
        backoff_base: float = 0.25,
        backoff_factor: float = 2.0,
        jitter: float = 0.2,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {batch_size}")
        if max_in_flight < 1:
            raise ValueError(f"max_in_flight must be >= 1, got {max_in_flight}")
        if retries < 0:
            raise ValueError(f"retries must be >= 0, got {retries}")
        self.endpoint = endpoint.rstrip("/")
        self.batch_size = batch_size
        self.max_in_flight = max_in_flight
        self.retries = retries
        self.timeout = timeout
        self.backoff_base = backoff_base
        self.backoff_factor = backoff_factor
        self.jitter = jitter
        self.stats = TransferStats()
        self._sleep = sleep
        self._lock = threading.Lock()

    def logits_for(self, prompts: Sequence[Prompt]) -> list[TokenLogits]:
        pairs = [parse_prompt(prompt.text) for prompt in prompts]
        return self.score_pairs(pairs)

    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[TokenLogits]:
        """Score raw (query, document) pairs; see class docs for semantics."""
        if not pairs:
            return []
        batches = [
            list(pairs[start:start + self.batch_size])
            for start in range(0, len(pairs), self.batch_size)
        ]
        self.stats = TransferStats(batches=len(batches))
        results: list[list[TokenLogits] | None] = [None] * len(batches)
        with httpx.Client(timeout=self.timeout) as client:
            with ThreadPoolExecutor(max_workers=self.max_in_flight) as pool:
                futures = [
                    pool.submit(self._send_with_retry, client, index, batch)
                    for index, batch in enumerate(batches)
                ]
                for index, future in enumerate(futures):
                    results[index] = future.result()
        flat: list[TokenLogits] = []
        for chunk in results:
            assert chunk is not None
            flat.extend(chunk)
        return flat

    def health(self) -> dict:
        """Fetch the health document; raises if the endpoint is unreachable."""
        try:
            response = httpx.get(self.endpoint + HEALTH_PATH, timeout=self.timeout)
        except httpx.HTTPError as exc:
            raise ScorerUnavailable(f"health check failed: {exc}") from exc
        if response.status_code != 200:
            raise ScorerUnavailable(f"health check returned HTTP {response.status_code}")
        try:
            payload = response.json()
        except ValueError as exc:
            raise ProtocolError("health response is not JSON") from exc
        if not isinstance(payload, dict) or payload.get("status") != "ok":
            raise ProtocolError(f"unexpected health payload: {payload!r}")
        return payload

    def _send_with_retry(
        self, client: httpx.Client, batch_index: int, batch: list[tuple[str, str]]
    ) -> list[TokenLogits]:
        body = {"pairs": [{"query": q, "document": d} for q, d in batch]}
        last_reason = ""
        for attempt in range(self.retries + 1):
            if attempt > 0:
                self._record_retry(batch_index, attempt, last_reason)
                self._sleep(self._backoff_delay(attempt - 1))
            try:
                with self._lock:
                    self.stats.requests += 1
                response = client.post(self.endpoint + SCORE_PATH, json=body)
            except httpx.HTTPError as exc:
                last_reason = f"transport error: {exc}"
                log.warning("batch %d attempt %d failed: %s", batch_index, attempt, last_reason)
                continue
            if response.status_code == 200:
                try:
                    payload = response.json()
                except ValueError as exc:
                    raise ProtocolError(
                        f"batch {batch_index}: response body is not JSON"
                    ) from exc
                try:
                    return _check_logits_payload(payload, len(batch))
                except ProtocolError as exc:
                    raise ProtocolError(f"batch {batch_index}: {exc}") from None
            if response.status_code >= 500:
                last_reason = f"HTTP {response.status_code}"
                log.warning("batch %d attempt %d failed: %s", batch_index, attempt, last_reason)
                continue
            # 4xx: the request itself is wrong; retrying cannot help.
            raise ProtocolError(f"batch {batch_index}: server rejected request with HTTP {response.status_code}")
        raise ScorerUnavailable(
            f"batch {batch_index} failed after {self.retries + 1} attempts ({last_reason})"
        )

    def _backoff_delay(self, exponent: int) -> float:
        base = self.backoff_base * (self.backoff_factor ** exponent)
        return base * (1.0 + random.uniform(-self.jitter, self.jitter))

    def _record_retry(self, batch_index: int, attempt: int, reason: str) -> None:
        with self._lock:
            self.stats.retry_events.append(RetryEvent(batch_index, attempt, reason))


def remote_score(
    endpoint: str,
    prompts: Sequence[Prompt],
    *,
    batch_size: int = 16,
    max_in_flight: int = 4,
    retries: int = 3,
    timeout: float = 30.0,
) -> list[TokenLogits]:
    """One-shot convenience wrapper around :class:`RemoteScorer`."""
    scorer = RemoteScorer(
        endpoint,
        batch_size=batch_size,
        max_in_flight=max_in_flight,
        retries=retries,
        timeout=timeout,
    )
    return scorer.logits_for(prompts)
