"""HTTP service, configuration, and durable state."""

from .app import build_provider_set, create_app
from .config import ServiceConfig
from .store import IdempotencyStore, PreviewStore, SessionStore

__all__ = [
    "IdempotencyStore",
    "PreviewStore",
    "ServiceConfig",
    "SessionStore",
    "build_provider_set",
    "create_app",
]
