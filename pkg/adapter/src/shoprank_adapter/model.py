"""Seq2seq relevance scoring: one decoding step, two token logits.

The model reads the fixed template

    Query: {query} Document: {document} Relevant:

and the score signal is the pair of first-step decoder logits for the
configured positive and negative tokens. No generation loop runs; the
client turns the two logits into a probability on its side.

Truncation is token-true and one-sided: the template is assembled from
tokenized parts, and only the document's token run is cut to keep the
whole input inside ``max_length``. The query is never shortened, even
when that alone overflows the budget.
"""

from __future__ import annotations

from typing import Sequence

import torch
from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

from .config import AdapterConfig


class TokenResolutionError(RuntimeError):
    """A configured target token does not map to a single vocabulary id."""


def render_template(query: str, document: str) -> str:
    return f"Query: {query} Document: {document} Relevant:"


class RelevanceModel:
    def __init__(self, config: AdapterConfig):
        self.config = config
        self.tokenizer = AutoTokenizer.from_pretrained(config.model_path)
        self.model = AutoModelForSeq2SeqLM.from_pretrained(config.model_path)
        self.model.to(config.device)
        self.model.eval()

        self.positive_id = self._single_token_id(config.positive_token)
        self.negative_id = self._single_token_id(config.negative_token)

        start = self.model.config.decoder_start_token_id
        if start is None:
            start = self.model.config.pad_token_id
        if start is None:
            raise TokenResolutionError("model config has no decoder start token")
        self.decoder_start_id = int(start)

    def _single_token_id(self, token: str) -> int:
        ids = self.tokenizer(token, add_special_tokens=False)["input_ids"]
        if len(ids) != 1:
            raise TokenResolutionError(
                f"target token {token!r} tokenizes to {len(ids)} pieces; need exactly 1"
            )
        token_id = ids[0]
        unk = self.tokenizer.unk_token_id
        if unk is not None and token_id == unk and token != self.tokenizer.unk_token:
            raise TokenResolutionError(
                f"target token {token!r} is not in the model vocabulary"
            )
        return int(token_id)

    def _encode(self, query: str, document: str) -> list[int]:
        """Template token ids with the document cut to the length budget."""
        encode = lambda text: self.tokenizer(text, add_special_tokens=False)["input_ids"]
        prefix = encode(f"Query: {query} Document:")
        suffix = encode("Relevant:")
        doc_ids = encode(document)
        eos = self.tokenizer.eos_token_id
        overhead = len(prefix) + len(suffix) + (1 if eos is not None else 0)
        budget = max(0, self.config.max_length - overhead)
        ids = prefix + doc_ids[:budget] + suffix
        if eos is not None:
            ids.append(eos)
        return ids

    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[tuple[float, float]]:
        """First-step (positive, negative) logits for each (query, document)."""
        results: list[tuple[float, float]] = []
        step = self.config.internal_batch_size
        for start in range(0, len(pairs), step):
            results.extend(self._score_chunk(pairs[start:start + step]))
        return results

    def _score_chunk(self, pairs: Sequence[tuple[str, str]]) -> list[tuple[float, float]]:
        encoded = [self._encode(query, document) for query, document in pairs]
        width = max(len(ids) for ids in encoded)
        pad = self.tokenizer.pad_token_id
        if pad is None:
            pad = 0
        input_ids = torch.tensor(
            [ids + [pad] * (width - len(ids)) for ids in encoded],
            dtype=torch.long, device=self.config.device,
        )
        attention_mask = torch.tensor(
            [[1] * len(ids) + [0] * (width - len(ids)) for ids in encoded],
            dtype=torch.long, device=self.config.device,
        )
        decoder_input_ids = torch.full(
            (len(pairs), 1), self.decoder_start_id,
            dtype=torch.long, device=self.config.device,
        )
        with torch.no_grad():
            output = self.model(
                input_ids=input_ids,
                attention_mask=attention_mask,
                decoder_input_ids=decoder_input_ids,
            )
        step_logits = output.logits[:, 0, :]
        return [
            (float(row[self.positive_id]), float(row[self.negative_id]))
            for row in step_logits
        ]
