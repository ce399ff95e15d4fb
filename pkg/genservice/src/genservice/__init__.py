"""Generation service: beam, MC-dropout and top-k sentence generation over HTTP."""

from .app import GenerationRequest, GenerationResponse, create_app
from .model import HFBackend, TinyBackend, load_backend
from .service import GenerationService, OverloadedError, ResolvedRequest

__version__ = "0.1.0"

__all__ = [
    "GenerationRequest",
    "GenerationResponse",
    "GenerationService",
    "HFBackend",
    "OverloadedError",
    "ResolvedRequest",
    "TinyBackend",
    "create_app",
    "load_backend",
]
