"""HTTP scoring service: a seq2seq relevance model behind the wire protocol."""

from .config import AdapterConfig, AdapterConfigError
from .model import RelevanceModel, TokenResolutionError, render_template
from .server import create_app

__version__ = "0.1.0"

__all__ = [
    "AdapterConfig",
    "AdapterConfigError",
    "RelevanceModel",
    "TokenResolutionError",
    "create_app",
    "render_template",
]
