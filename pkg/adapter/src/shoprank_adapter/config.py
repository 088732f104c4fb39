"""Adapter configuration: which checkpoint to serve and how."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping


class AdapterConfigError(ValueError):
    pass


@dataclass(frozen=True)
class AdapterConfig:
    """Settings for one serving process.

    ``model_path`` is any local directory or hub id that
    AutoModelForSeq2SeqLM can load. The positive and negative tokens must
    each map to a single vocabulary id in that model's tokenizer; startup
    fails otherwise, because first-token logits are meaningless for
    multi-piece words.
    """

    model_path: str
    device: str = "cpu"
    max_length: int = 512
    positive_token: str = "true"
    negative_token: str = "false"
    model_tag: str | None = None
    internal_batch_size: int = 32

    def __post_init__(self) -> None:
        if not self.model_path:
            raise AdapterConfigError("model_path is required")
        if self.max_length < 4:
            raise AdapterConfigError(f"max_length too small: {self.max_length}")
        if not self.positive_token or not self.negative_token:
            raise AdapterConfigError("positive and negative tokens must be non-empty")
        if self.positive_token == self.negative_token:
            raise AdapterConfigError("positive and negative tokens must differ")
        if self.internal_batch_size < 1:
            raise AdapterConfigError("internal_batch_size must be positive")

    @property
    def tag(self) -> str:
        return self.model_tag or Path(self.model_path).name

    @classmethod
    def from_env(cls, env: Mapping[str, str] | None = None) -> "AdapterConfig":
        """Build a config from SHOPRANK_ADAPTER_* environment variables."""
        env = os.environ if env is None else env
        model_path = env.get("SHOPRANK_ADAPTER_MODEL", "")
        if not model_path:
            raise AdapterConfigError("SHOPRANK_ADAPTER_MODEL is not set")
        kwargs = {}
        if "SHOPRANK_ADAPTER_DEVICE" in env:
            kwargs["device"] = env["SHOPRANK_ADAPTER_DEVICE"]
        if "SHOPRANK_ADAPTER_MAX_LENGTH" in env:
            kwargs["max_length"] = int(env["SHOPRANK_ADAPTER_MAX_LENGTH"])
        if "SHOPRANK_ADAPTER_POSITIVE_TOKEN" in env:
            kwargs["positive_token"] = env["SHOPRANK_ADAPTER_POSITIVE_TOKEN"]
        if "SHOPRANK_ADAPTER_NEGATIVE_TOKEN" in env:
            kwargs["negative_token"] = env["SHOPRANK_ADAPTER_NEGATIVE_TOKEN"]
        if "SHOPRANK_ADAPTER_MODEL_TAG" in env:
            kwargs["model_tag"] = env["SHOPRANK_ADAPTER_MODEL_TAG"]
        return cls(model_path=model_path, **kwargs)
