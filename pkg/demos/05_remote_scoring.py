"""Scoring over HTTP: the wire protocol and the batching client.

A scoring service exposes two endpoints:

    POST /v1/score   {"pairs": [{"query": q, "document": d}, ...]}
                  -> {"logits": [{"logit_pos": a, "logit_neg": b}, ...]}
    GET  /v1/health  -> {"status": "ok", "model": "<tag>"}

The client chunks pairs into fixed-size batches, runs a bounded number
of batches concurrently, retries 5xx and transport errors with
exponential backoff, and reassembles results in request order. This
demo stands up a tiny in-process server that serves 503 for its first
request (a model still warming up), then answers normally.
"""

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from shoprank import RemoteScorer


class DemoHandler(BaseHTTPRequestHandler):
    served = 0

    def log_message(self, *args):
        pass

    def _send(self, status, payload):
        body = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        self._send(200, {"status": "ok", "model": "demo-lexical"})

    def do_POST(self):
        DemoHandler.served += 1
        if DemoHandler.served == 1:
            self._send(503, {"error": "model loading"})
            return
        request = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        logits = [
            {"logit_pos": float(len(pair["document"])),
             "logit_neg": float(len(pair["query"]))}
            for pair in request["pairs"]
        ]
        self._send(200, {"logits": logits})


server = ThreadingHTTPServer(("127.0.0.1", 0), DemoHandler)
threading.Thread(target=lambda: server.serve_forever(poll_interval=0.05),
                 daemon=True).start()
endpoint = f"http://127.0.0.1:{server.server_address[1]}"

scorer = RemoteScorer(endpoint, batch_size=2, max_in_flight=2,
                      retries=3, backoff_base=0.05, jitter=0.0)

print(f"health: {scorer.health()}")
print()

pairs = [(f"query {i}", "d" * (10 + i)) for i in range(5)]
results = scorer.score_pairs(pairs)
print("scored 5 pairs in batches of 2:")
for (query, document), logits in zip(pairs, results):
    print(f"  {query!r:12} -> logit_pos={logits.logit_pos:.1f} "
          f"logit_neg={logits.logit_neg:.1f}")

print()
stats = scorer.stats
print(f"batches sent: {stats.batches}, HTTP requests: {stats.requests}, "
      f"retry events: {len(stats.retry_events)}")
print("(one extra request and one retry event: the first batch hit the")
print("warming-up 503 and was retried; a malformed or 4xx response would")
print("fail immediately instead, and exhausted retries raise")
print("ScorerUnavailable so callers can tell an outage from a bad request.)")

server.shutdown()
server.server_close()
