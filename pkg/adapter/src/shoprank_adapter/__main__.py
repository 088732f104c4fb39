"""Serve a checkpoint: shoprank-adapter --model <path-or-id> [--port 8000]."""

from __future__ import annotations

import argparse

import uvicorn

from .config import AdapterConfig, AdapterConfigError
from .server import create_app


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shoprank-adapter",
        description="Serve a seq2seq relevance model behind the scoring wire protocol.",
    )
    parser.add_argument("--model", help="checkpoint path or hub id "
                        "(default: $SHOPRANK_ADAPTER_MODEL)")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--device", help="torch device, e.g. cpu or cuda:0")
    parser.add_argument("--max-length", dest="max_length", type=int,
                        help="input budget in tokenizer pieces (default 512)")
    parser.add_argument("--positive-token", dest="positive_token")
    parser.add_argument("--negative-token", dest="negative_token")
    parser.add_argument("--model-tag", dest="model_tag",
                        help="name reported by /v1/health")
    return parser


def config_from_args(args: argparse.Namespace) -> AdapterConfig:
    base = AdapterConfig.from_env() if args.model is None else AdapterConfig(args.model)
    overrides = {
        name: getattr(args, name)
        for name in ("device", "max_length", "positive_token", "negative_token", "model_tag")
        if getattr(args, name) is not None
    }
    if not overrides:
        return base
    from dataclasses import replace
    return replace(base, **overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except (AdapterConfigError, ValueError) as exc:
        build_parser().error(str(exc))
        return 2
    uvicorn.run(create_app(config), host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
