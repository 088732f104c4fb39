"""Product-search reranking toolkit.

Pipeline pieces, in data-flow order: catalog ingestion and validation,
HTML-free document assembly, budgeted prompt rendering, relevance scoring
(local lexical baseline or remote model endpoint), per-query ranking with
run-file and submission output, graded ranking metrics, and training-set
export for fine-tuning pointwise rerankers.
"""

from .catalog import (
    Catalog,
    CatalogError,
    ConflictingQueryText,
    DuplicateJudgment,
    DuplicateProductId,
    EsciLabel,
    MalformedRow,
    MissingColumn,
    Product,
    QueryJudgments,
    UnknownLabel,
    ValidationReport,
    load_judgments,
    load_products,
    save_judgments,
    save_products,
    validate,
)
from .documents import DocumentText, build_document, strip_html
from .errors import ShopRankError
from .evaluation import (
    EvalReport,
    GainMap,
    NegativeGain,
    QueryIdMismatch,
    dcg,
    evaluate_run,
    ndcg_at_k,
    write_report,
)
from .prompts import (
    DOCUMENT_MARKER,
    QUERY_MARKER,
    RELEVANT_MARKER,
    LengthBudget,
    MalformedPromptText,
    Prompt,
    default_length_fn,
    parse_prompt,
    render,
)
from .ranking import (
    DuplicateProduct,
    MalformedLine,
    MixedQueryIds,
    Ranking,
    RunFile,
    rank_query,
    read_run,
    write_run,
    write_submission,
)
from .remote import (
    HEALTH_PATH,
    SCORE_PATH,
    ProtocolError,
    RemoteScorer,
    RetryEvent,
    ScorerUnavailable,
    TransferStats,
    remote_score,
)
from .scoring import (
    EmptyBatch,
    LexicalScorer,
    NonFiniteLogit,
    RelevanceScore,
    ScoredPair,
    Scorer,
    ScorerContractViolation,
    TokenLogits,
    lexical_logits,
    score_batch,
    softmax_pos,
)
from .trainset import (
    NEGATIVE_TOKEN,
    POSITIVE_TOKEN,
    TrainExample,
    binarize,
    build_examples,
    export_training,
)

__version__ = "0.1.0"

__all__ = [
    "Catalog",
    "CatalogError",
    "ConflictingQueryText",
    "DuplicateJudgment",
    "DuplicateProductId",
    "EsciLabel",
    "MalformedRow",
    "MissingColumn",
    "Product",
    "QueryJudgments",
    "UnknownLabel",
    "ValidationReport",
    "load_judgments",
    "load_products",
    "save_judgments",
    "save_products",
    "validate",
    "DocumentText",
    "build_document",
    "strip_html",
    "ShopRankError",
    "EvalReport",
    "GainMap",
    "NegativeGain",
    "QueryIdMismatch",
    "dcg",
    "evaluate_run",
    "ndcg_at_k",
    "write_report",
    "DOCUMENT_MARKER",
    "QUERY_MARKER",
    "RELEVANT_MARKER",
    "LengthBudget",
    "MalformedPromptText",
    "Prompt",
    "default_length_fn",
    "parse_prompt",
    "render",
    "DuplicateProduct",
    "MalformedLine",
    "MixedQueryIds",
    "Ranking",
    "RunFile",
    "rank_query",
    "read_run",
    "write_run",
    "write_submission",
    "HEALTH_PATH",
    "SCORE_PATH",
    "ProtocolError",
    "RemoteScorer",
    "RetryEvent",
    "ScorerUnavailable",
    "TransferStats",
    "remote_score",
    "EmptyBatch",
    "LexicalScorer",
    "NonFiniteLogit",
    "RelevanceScore",
    "ScoredPair",
    "Scorer",
    "ScorerContractViolation",
    "TokenLogits",
    "lexical_logits",
    "score_batch",
    "softmax_pos",
    "NEGATIVE_TOKEN",
    "POSITIVE_TOKEN",
    "TrainExample",
    "binarize",
    "build_examples",
    "export_training",
    "__version__",
]
