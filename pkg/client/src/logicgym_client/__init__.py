"""Client SDK for the logicgym environment service."""

__version__ = "0.1.0"

from .client import (
    ClientError,
    ConnectionFailed,
    EnvClient,
    Instance,
    ScoredResult,
    ServerError,
    SessionHandle,
    ValidationError,
)
from .offline import CorpusRecord, OfflineEnv, OfflineScorer, load_corpus

__all__ = [
    "ClientError", "ConnectionFailed", "EnvClient", "Instance", "ScoredResult",
    "ServerError", "SessionHandle", "ValidationError",
    "CorpusRecord", "OfflineEnv", "OfflineScorer", "load_corpus",
    "__version__",
]
