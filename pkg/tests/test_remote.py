import threading

import pytest

from mock_remote import MockScoreServer, echo_logits, ok_script
from shoprank.prompts import Prompt
from shoprank.remote import (
    ProtocolError,
    RemoteScorer,
    ScorerUnavailable,
    remote_score,
)
from shoprank.scoring import TokenLogits, score_batch


def prompt(query, document, query_id="q1", product_id="p1"):
    return Prompt(
        query_id=query_id,
        product_id=product_id,
        text=f"Query: {query} Document: {document} Relevant:",
        truncated=False,
    )


def pairs(n):
    return [(f"query {i}", f"document {i:03d}") for i in range(n)]


def fast_scorer(url, **kwargs):
    kwargs.setdefault("backoff_base", 0.001)
    kwargs.setdefault("jitter", 0.0)
    return RemoteScorer(url, **kwargs)


class TestBatching:
    def test_batch_sizes_4_4_2(self):
        with MockScoreServer() as server:
            scorer = fast_scorer(server.url, batch_size=4, max_in_flight=1)
            results = scorer.score_pairs(pairs(10))
        assert server.batch_sizes() == [4, 4, 2]
        assert len(results) == 10
        assert scorer.stats.batches == 3
        assert scorer.stats.requests == 3
        assert scorer.stats.retry_events == []

    def test_batch_sizes_with_concurrent_dispatch(self):
        with MockScoreServer() as server:
            scorer = fast_scorer(server.url, batch_size=4, max_in_flight=4)
            scorer.score_pairs(pairs(10))
        assert sorted(server.batch_sizes()) == [2, 4, 4]

    def test_single_batch_when_size_is_large(self):
        with MockScoreServer() as server:
            scorer = fast_scorer(server.url, batch_size=100)
            scorer.score_pairs(pairs(10))
        assert server.batch_sizes() == [10]

    def test_empty_input_sends_nothing(self):
        with MockScoreServer() as server:
            scorer = fast_scorer(server.url)
            assert scorer.score_pairs([]) == []
        assert server.requests == []

    def test_results_align_with_input_order(self):
        with MockScoreServer() as server:
            scorer = fast_scorer(server.url, batch_size=3)
            sent = pairs(8)
            results = scorer.score_pairs(sent)
        expected = [
            TokenLogits(float(len(document)), float(len(query)))
            for query, document in sent
        ]
        assert results == expected

    def test_order_preserved_when_first_batch_finishes_last(self):
        def script(request):
            spec = {"json": echo_logits(request.pairs)}
            if request.index == 0:
                spec["delay"] = 0.3
            return spec

        with MockScoreServer(script) as server:
            scorer = fast_scorer(server.url, batch_size=2, max_in_flight=4)
            sent = pairs(8)
            results = scorer.score_pairs(sent)
        assert results == [
            TokenLogits(float(len(document)), float(len(query)))
            for query, document in sent
        ]

    def test_max_in_flight_bounds_concurrency(self):
        active = {"now": 0, "peak": 0}
        gate = threading.Lock()

        def script(request):
            with gate:
                active["now"] += 1
                active["peak"] = max(active["peak"], active["now"])
            spec = {"json": echo_logits(request.pairs), "delay": 0.05}
            with gate:
                active["now"] -= 1
            return spec

        with MockScoreServer(script) as server:
            scorer = fast_scorer(server.url, batch_size=1, max_in_flight=2)
            scorer.score_pairs(pairs(8))
        assert active["peak"] <= 2


class TestRetries:
    def test_fail_twice_then_succeed(self):
        def script(request):
            if request.index < 2:
                return {"status": 503, "json": {"error": "warming up"}}
            return ok_script(request)

        with MockScoreServer(script) as server:
            scorer = fast_scorer(server.url, retries=3)
            results = scorer.score_pairs(pairs(2))
        assert len(results) == 2
        assert len(scorer.stats.retry_events) == 2
        assert [event.attempt for event in scorer.stats.retry_events] == [1, 2]
        assert scorer.stats.requests == 3

    def test_retries_exhausted_raises_unavailable(self):
        with MockScoreServer(lambda request: {"status": 503, "json": {}}) as server:
            scorer = fast_scorer(server.url, retries=2)
            with pytest.raises(ScorerUnavailable) as exc:
                scorer.score_pairs(pairs(1))
        assert "503" in str(exc.value)
        assert len(server.requests) == 3

    def test_zero_retries_fails_on_first_error(self):
        with MockScoreServer(lambda request: {"status": 500, "json": {}}) as server:
            scorer = fast_scorer(server.url, retries=0)
            with pytest.raises(ScorerUnavailable):
                scorer.score_pairs(pairs(1))
        assert len(server.requests) == 1

    def test_unreachable_endpoint(self):
        scorer = fast_scorer("http://127.0.0.1:9", retries=1)
        with pytest.raises(ScorerUnavailable):
            scorer.score_pairs(pairs(1))

    def test_backoff_schedule_without_jitter(self):
        delays = []
        with MockScoreServer(lambda request: {"status": 503, "json": {}}) as server:
            scorer = RemoteScorer(
                server.url,
                retries=3,
                backoff_base=0.25,
                backoff_factor=2.0,
                jitter=0.0,
                sleep=delays.append,
            )
            with pytest.raises(ScorerUnavailable):
                scorer.score_pairs(pairs(1))
        assert delays == [0.25, 0.5, 1.0]

    def test_backoff_jitter_within_bounds(self):
        delays = []
        with MockScoreServer(lambda request: {"status": 503, "json": {}}) as server:
            scorer = RemoteScorer(
                server.url,
                retries=3,
                backoff_base=0.25,
                backoff_factor=2.0,
                jitter=0.2,
                sleep=delays.append,
            )
            with pytest.raises(ScorerUnavailable):
                scorer.score_pairs(pairs(1))
        expected = [0.25, 0.5, 1.0]
        assert len(delays) == 3
        for got, base in zip(delays, expected):
            assert base * 0.8 <= got <= base * 1.2


class TestProtocolErrors:
    def test_length_mismatch_not_retried(self):
        def script(request):
            body = echo_logits(request.pairs)
            body["logits"].append({"logit_pos": 0.0, "logit_neg": 0.0})
            return {"json": body}

        with MockScoreServer(script) as server:
            scorer = fast_scorer(server.url, retries=3)
            with pytest.raises(ProtocolError):
                scorer.score_pairs(pairs(2))
        assert len(server.requests) == 1

    def test_non_json_body(self):
        with MockScoreServer(lambda request: {"body": b"<html>oops</html>"}) as server:
            scorer = fast_scorer(server.url)
            with pytest.raises(ProtocolError):
                scorer.score_pairs(pairs(1))

    def test_non_numeric_logit(self):
        def script(request):
            return {"json": {"logits": [{"logit_pos": "high", "logit_neg": 0.0}]}}

        with MockScoreServer(script) as server:
            scorer = fast_scorer(server.url)
            with pytest.raises(ProtocolError) as exc:
                scorer.score_pairs(pairs(1))
        assert "entry 0" in str(exc.value)

    def test_boolean_logit_rejected(self):
        def script(request):
            return {"json": {"logits": [{"logit_pos": True, "logit_neg": 0.0}]}}

        with MockScoreServer(script) as server:
            scorer = fast_scorer(server.url)
            with pytest.raises(ProtocolError):
                scorer.score_pairs(pairs(1))

    def test_non_finite_logit(self):
        # json.dumps happily emits bare NaN, and permissive parsers accept
        # it, so the client must catch it after decoding.
        def script(request):
            return {"body": b'{"logits": [{"logit_pos": NaN, "logit_neg": 0.0}]}',
                    "content_type": "application/json"}

        with MockScoreServer(script) as server:
            scorer = fast_scorer(server.url)
            with pytest.raises(ProtocolError) as exc:
                scorer.score_pairs(pairs(1))
        assert "non-finite" in str(exc.value)

    def test_missing_logits_key(self):
        with MockScoreServer(lambda request: {"json": {"scores": []}}) as server:
            scorer = fast_scorer(server.url)
            with pytest.raises(ProtocolError):
                scorer.score_pairs(pairs(1))

    def test_400_not_retried(self):
        with MockScoreServer(lambda request: {"status": 400, "json": {"error": "bad"}}) as server:
            scorer = fast_scorer(server.url, retries=3)
            with pytest.raises(ProtocolError) as exc:
                scorer.score_pairs(pairs(1))
        assert "400" in str(exc.value)
        assert len(server.requests) == 1


class TestScorerIntegration:
    def test_logits_for_recovers_query_and_document(self):
        with MockScoreServer() as server:
            scorer = fast_scorer(server.url)
            score_batch(scorer, [prompt("red shoe", "Acme sneaker")])
        assert server.requests[0].pairs == [("red shoe", "Acme sneaker")]

    def test_score_batch_end_to_end(self):
        with MockScoreServer() as server:
            scorer = fast_scorer(server.url, batch_size=2)
            prompts = [
                prompt("q", "dd", product_id="p1"),
                prompt("q", "d", product_id="p2"),
                prompt("q", "dddd", product_id="p3"),
            ]
            scored = score_batch(scorer, prompts)
        # echo server: logit_pos = len(document), logit_neg = len(query)
        assert [p.product_id for p in scored] == ["p1", "p2", "p3"]
        assert scored[2].score.value > scored[0].score.value > scored[1].score.value

    def test_remote_score_wrapper(self):
        with MockScoreServer() as server:
            results = remote_score(
                server.url,
                [prompt("ab", "xyz")],
                batch_size=4,
                max_in_flight=2,
                retries=1,
            )
        assert results == [TokenLogits(3.0, 2.0)]

    def test_trailing_slash_normalized(self):
        with MockScoreServer() as server:
            scorer = fast_scorer(server.url + "/")
            assert scorer.score_pairs(pairs(1))

    def test_health(self):
        with MockScoreServer(model="tiny-test") as server:
            payload = fast_scorer(server.url).health()
        assert payload == {"status": "ok", "model": "tiny-test"}

    def test_health_unreachable(self):
        scorer = fast_scorer("http://127.0.0.1:9")
        with pytest.raises(ScorerUnavailable):
            scorer.health()


class TestConstructorValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"batch_size": 0},
            {"max_in_flight": 0},
            {"retries": -1},
        ],
    )
    def test_rejects_bad_params(self, kwargs):
        with pytest.raises(ValueError):
            RemoteScorer("http://example.invalid", **kwargs)
