"""Shared fixtures: a tiny randomly initialized checkpoint served offline.

The checkpoint is a 2-layer T5 with a whitespace WordLevel tokenizer
whose vocabulary contains the template markers and the true/false
target tokens. Weights are random but fixed by seed; tests assert
protocol and determinism properties, never score quality.
"""

from pathlib import Path

import pytest
import torch
from fastapi.testclient import TestClient
from tokenizers import Tokenizer
from tokenizers.models import WordLevel
from tokenizers.pre_tokenizers import WhitespaceSplit
from transformers import PreTrainedTokenizerFast, T5Config, T5ForConditionalGeneration

from shoprank_adapter import AdapterConfig, RelevanceModel, create_app

PRIMARY_FIXTURES = Path(__file__).parent.parent.parent / "tests" / "fixtures"

WORDS = [
    "Query:", "Document:", "Relevant:", "true", "false",
    "red", "shoe", "canvas", "with", "rubber", "sole", "blue", "wool", "hat",
    "espresso", "maker", "machine", "15", "bar", "laptop", "sleeve",
    "padded", "neoprene", "fits", "13", "inch", "word", "q", "d",
]


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory):
    path = tmp_path_factory.mktemp("tiny-relevance-model")
    vocab = {"<pad>": 0, "</s>": 1, "<unk>": 2}
    for word in WORDS:
        vocab[word] = len(vocab)

    tokenizer = Tokenizer(WordLevel(vocab, unk_token="<unk>"))
    tokenizer.pre_tokenizer = WhitespaceSplit()
    fast = PreTrainedTokenizerFast(
        tokenizer_object=tokenizer,
        pad_token="<pad>", eos_token="</s>", unk_token="<unk>",
    )
    fast.save_pretrained(path)

    torch.manual_seed(1234)
    config = T5Config(
        vocab_size=len(vocab), d_model=32, d_kv=8, d_ff=64,
        num_layers=2, num_heads=2,
        decoder_start_token_id=0, pad_token_id=0, eos_token_id=1,
    )
    T5ForConditionalGeneration(config).save_pretrained(path)
    return str(path)


@pytest.fixture(scope="session")
def adapter_config(tiny_checkpoint):
    return AdapterConfig(model_path=tiny_checkpoint, model_tag="tiny-test")


@pytest.fixture(scope="session")
def loaded_model(adapter_config):
    return RelevanceModel(adapter_config)


@pytest.fixture(scope="session")
def client(adapter_config, loaded_model):
    app = create_app(adapter_config, loader=lambda config: loaded_model)
    with TestClient(app) as test_client:
        yield test_client
