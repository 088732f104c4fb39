"""Command-line pipeline: validate, rank, evaluate, export-train.

Configuration can come from flags or a TOML file (``--config``); a flag
always wins over the file, and built-in defaults fill the rest. The remote
endpoint additionally falls back to the ``SHOPRANK_ENDPOINT`` environment
variable. Logs go to stderr only; files and stdout carry machine-readable
output. Exit codes: 0 success, 1 validation or configuration errors,
2 scorer unavailable.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - 3.10 fallback
    import tomli as tomllib

from . import catalog as catalog_mod
from .catalog import Catalog, QueryJudgments
from .documents import build_document
from .errors import ShopRankError
from .evaluation import GainMap, evaluate_run, write_report
from .prompts import LengthBudget, Prompt, render
from .ranking import RunFile, rank_query, read_run, write_run, write_submission
from .remote import RemoteScorer, ScorerUnavailable
from .scoring import LexicalScorer, Scorer, score_batch
from .trainset import export_training

log = logging.getLogger("shoprank")

RUN_FILENAME = "run.trec"
SUBMISSION_FILENAME = "submission.csv"
REPORT_FILENAME = "eval.json"
TRAIN_FILENAME = "train.jsonl"

_GAIN_KEYS = {"e": "exact", "s": "substitute", "c": "complement", "i": "irrelevant"}


class ConfigError(ShopRankError):
    pass


@dataclass
class PipelineConfig:
    products: str | None = None
    judgments: str | None = None
    judgments_task2: str | None = None
    scorer: str = "lexical"
    endpoint: str | None = None
    batch_size: int = 16
    max_in_flight: int = 4
    retries: int = 3
    max_units: int = 512
    k: int = 20
    gains: GainMap = GainMap()
    run_tag: str = "shoprank"
    locale: str | None = None
    out_dir: str = "out"
    skip_zero: bool = False

    def __post_init__(self) -> None:
        for name in ("batch_size", "max_in_flight", "max_units", "k"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name.replace('_', '-')} must be positive")
        if self.retries < 0:
            raise ConfigError("retries must be >= 0")
        if self.scorer not in ("lexical", "remote"):
            raise ConfigError(f"unknown scorer {self.scorer!r} (expected lexical or remote)")


def parse_gains(raw: object) -> GainMap:
    """Accept ``E=1.0,S=0.1,...`` strings or TOML tables; keys are E/S/C/I."""
    if isinstance(raw, GainMap):
        return raw
    if isinstance(raw, str):
        items = {}
        for part in raw.split(","):
            part = part.strip()
            if not part:
                continue
            key, sep, value = part.partition("=")
            if not sep:
                raise ConfigError(f"gain entry {part!r} is not KEY=VALUE")
            items[key.strip()] = value.strip()
        raw = items
    if not isinstance(raw, dict):
        raise ConfigError(f"cannot parse gains from {raw!r}")
    overrides = {}
    for key, value in raw.items():
        name = str(key).strip().lower()
        field = _GAIN_KEYS.get(name) or (name if name in _GAIN_KEYS.values() else None)
        if field is None:
            raise ConfigError(f"unknown gain key {key!r} (expected E, S, C, or I)")
        try:
            overrides[field] = float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"gain value {value!r} for {key!r} is not a number") from None
    try:
        return GainMap(**{**GainMap().as_dict(), **overrides})
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "rb") as handle:
            return tomllib.load(handle)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid TOML: {exc}") from None


def resolve_config(args: argparse.Namespace) -> PipelineConfig:
    """Merge flag > config file > environment (endpoint) > default."""
    file_values = _load_config_file(getattr(args, "config", None))
    defaults = PipelineConfig()

    def pick(name: str, fallback):
        flag = getattr(args, name, None)
        if flag is not None:
            return flag
        if name in file_values:
            return file_values[name]
        return fallback

    endpoint = pick("endpoint", os.environ.get("SHOPRANK_ENDPOINT"))
    gains = parse_gains(pick("gains", defaults.gains))
    try:
        return PipelineConfig(
            products=pick("products", None),
            judgments=pick("judgments", None),
            judgments_task2=pick("judgments_task2", None),
            scorer=str(pick("scorer", defaults.scorer)),
            endpoint=endpoint,
            batch_size=int(pick("batch_size", defaults.batch_size)),
            max_in_flight=int(pick("max_in_flight", defaults.max_in_flight)),
            retries=int(pick("retries", defaults.retries)),
            max_units=int(pick("max_units", defaults.max_units)),
            k=int(pick("k", defaults.k)),
            gains=gains,
            run_tag=str(pick("run_tag", defaults.run_tag)),
            locale=pick("locale", None),
            out_dir=str(pick("out_dir", defaults.out_dir)),
            skip_zero=bool(pick("skip_zero", False)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid configuration value: {exc}") from None


def _require(config: PipelineConfig, *names: str) -> None:
    for name in names:
        if getattr(config, name) is None:
            raise ConfigError(f"--{name.replace('_', '-')} is required for this command")


def _load_catalog(config: PipelineConfig) -> Catalog:
    products = catalog_mod.load_products(config.products)
    queries = catalog_mod.load_judgments(config.judgments)
    if config.locale is not None:
        products = {key: p for key, p in products.items() if key[1] == config.locale}
        queries = [q for q in queries if q.locale == config.locale]
    return Catalog(products=products, queries=tuple(queries))


def _build_prompts(catalog: Catalog, budget: LengthBudget) -> list[Prompt]:
    prompts: list[Prompt] = []
    queries = sorted(catalog.queries, key=lambda q: q.query_id.encode("utf-8"))
    for position, query in enumerate(queries, start=1):
        for product_id, _ in query.judgments:
            product = catalog.resolve(product_id, query.locale)
            if product is None:
                log.warning(
                    "query %s: product %s not in catalog (locale %s); skipped",
                    query.query_id, product_id, query.locale,
                )
                continue
            prompts.append(
                render(query.query_text, build_document(product), budget,
                       query_id=query.query_id)
            )
        log.info("prepared query %d/%d (%s)", position, len(queries), query.query_id)
    return prompts


def _make_scorer(config: PipelineConfig) -> Scorer:
    if config.scorer == "lexical":
        return LexicalScorer()
    _require(config, "endpoint")
    return RemoteScorer(
        config.endpoint,
        batch_size=config.batch_size,
        max_in_flight=config.max_in_flight,
        retries=config.retries,
    )


def cmd_validate(config: PipelineConfig) -> int:
    _require(config, "products", "judgments")
    report = catalog_mod.validate(_load_catalog(config))
    print(report.to_text())
    return 1 if report.missing_products else 0


def cmd_rank(config: PipelineConfig) -> int:
    _require(config, "products", "judgments")
    catalog = _load_catalog(config)
    budget = LengthBudget(max_units=config.max_units)
    prompts = _build_prompts(catalog, budget)
    rankings = []
    if prompts:
        scorer = _make_scorer(config)
        log.info("scoring %d prompts with %s scorer", len(prompts), scorer.tag)
        scored = score_batch(scorer, prompts)
        by_query: dict[str, list] = {}
        for pair in scored:
            by_query.setdefault(pair.query_id, []).append(pair)
        rankings = [rank_query(pairs) for pairs in by_query.values()]
    run = RunFile(run_tag=config.run_tag, rankings=tuple(rankings))
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    run_path = out_dir / RUN_FILENAME
    submission_path = out_dir / SUBMISSION_FILENAME
    write_run(run, run_path)
    write_submission(run, submission_path)
    log.info("wrote %s and %s", run_path, submission_path)
    return 0


def cmd_evaluate(config: PipelineConfig, run_path: str) -> int:
    _require(config, "judgments")
    queries = catalog_mod.load_judgments(config.judgments)
    if config.locale is not None:
        queries = [q for q in queries if q.locale == config.locale]
    run = read_run(run_path)
    report = evaluate_run(run, queries, config.gains, config.k, skip_zero=config.skip_zero)
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / REPORT_FILENAME
    write_report(report, report_path)
    log.info("wrote %s (%d queries, %d skipped)", report_path, len(report.per_query), report.skipped)
    print(f"nDCG@{report.k} {report.macro_mean:.6f}")
    return 0


def cmd_export_train(config: PipelineConfig) -> int:
    _require(config, "products", "judgments")
    catalog = _load_catalog(config)
    tasks: dict[str, Sequence[QueryJudgments]] = {"task1": catalog.queries}
    if config.judgments_task2 is not None:
        task2 = catalog_mod.load_judgments(config.judgments_task2)
        if config.locale is not None:
            task2 = [q for q in task2 if q.locale == config.locale]
        tasks["task2"] = task2
    budget = LengthBudget(max_units=config.max_units)
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    train_path = out_dir / TRAIN_FILENAME
    count = export_training(catalog, tasks, budget, train_path)
    log.info("wrote %s", train_path)
    print(count)
    return 0


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="TOML config file; flags override its values")
    parser.add_argument("--products", help="products CSV path")
    parser.add_argument("--judgments", help="judgments CSV path")
    parser.add_argument("--scorer", choices=["lexical", "remote"], help="scorer backend")
    parser.add_argument("--endpoint", help="remote scorer URL (default: $SHOPRANK_ENDPOINT)")
    parser.add_argument("--batch-size", dest="batch_size", type=int)
    parser.add_argument("--max-in-flight", dest="max_in_flight", type=int)
    parser.add_argument("--retries", type=int)
    parser.add_argument("--max-units", dest="max_units", type=int, help="prompt length budget")
    parser.add_argument("--k", type=int, help="evaluation cutoff")
    parser.add_argument("--gains", help="gain overrides, e.g. E=1.0,S=0.1,C=0.01,I=0.0")
    parser.add_argument("--run-tag", dest="run_tag")
    parser.add_argument("--locale", help="restrict to one locale")
    parser.add_argument("--out-dir", dest="out_dir", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shoprank",
        description="Product-search reranking pipeline: validate, rank, evaluate, export-train.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check catalog consistency")
    _add_common_flags(p_validate)

    p_rank = sub.add_parser("rank", help="score and rank judged products per query")
    _add_common_flags(p_rank)

    p_eval = sub.add_parser("evaluate", help="score a run file against judgments")
    p_eval.add_argument("run", help="run file produced by the rank command")
    _add_common_flags(p_eval)
    p_eval.add_argument("--skip-zero", dest="skip_zero", action="store_const", const=True,
                        help="drop zero-ideal queries from the average instead of scoring 0")

    p_train = sub.add_parser("export-train", help="write fine-tuning pairs as JSON lines")
    _add_common_flags(p_train)
    p_train.add_argument("--judgments-task2", dest="judgments_task2",
                         help="optional second judgments CSV exported as task2")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
        if args.command == "validate":
            return cmd_validate(config)
        if args.command == "rank":
            return cmd_rank(config)
        if args.command == "evaluate":
            return cmd_evaluate(config, args.run)
        if args.command == "export-train":
            return cmd_export_train(config)
        raise ConfigError(f"unknown command {args.command!r}")
    except ScorerUnavailable as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ShopRankError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
