"""Strategy orchestration on top of a generation backend.

Requests are served one at a time (the lock also guards torch's global RNG
state); a bounded admission semaphore turns excess concurrency into
overload errors instead of queue growth.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass

from .model import load_backend

STRATEGIES = ("beam", "mc-dropout", "top-k")


class OverloadedError(RuntimeError):
    pass


def derive_seed(seed: int, index: int) -> int:
    material = f"{seed}:{index}".encode("utf-8")
    return int.from_bytes(hashlib.sha256(material).digest()[:8], "big")


@dataclass(frozen=True)
class ResolvedRequest:
    text: str
    strategy: str = "mc-dropout"
    num_samples: int = 4
    beam_size: int = 8
    top_k: int = 50
    max_length: int = 64
    seed: int | None = None


class GenerationService:
    def __init__(
        self,
        model_id: str = "builtin:tiny",
        dropout_p: float = 0.1,
        queue_limit: int = 4,
    ) -> None:
        self.model_id = model_id
        self.dropout_p = dropout_p
        self._backend = None
        self._lock = threading.Lock()
        self._slots = threading.BoundedSemaphore(queue_limit)

    @property
    def ready(self) -> bool:
        return self._backend is not None

    def load(self) -> None:
        if self._backend is None:
            self._backend = load_backend(self.model_id, self.dropout_p)

    @property
    def loaded_model_id(self) -> str:
        return self._backend.model_id if self._backend else self.model_id

    def generate(self, request: ResolvedRequest) -> tuple[list[str], list[str]]:
        """Sentences plus flags; ``flags`` names the indices of empty outputs."""
        if not self.ready:
            raise RuntimeError("model not loaded")
        if request.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {request.strategy!r}")
        if not self._slots.acquire(blocking=False):
            raise OverloadedError("generation queue is full")
        try:
            with self._lock:
                sentences = self._run(request)
        finally:
            self._slots.release()
        flags = [f"empty_sentence_{i}" for i, s in enumerate(sentences) if not s]
        return sentences, flags

    def _run(self, request: ResolvedRequest) -> list[str]:
        backend = self._backend

        def decode(mode: str, dropout: bool, index: int) -> str:
            seed = derive_seed(request.seed, index) if request.seed is not None else None
            return backend.generate_one(
                request.text,
                mode=mode,
                beam_size=request.beam_size,
                top_k=request.top_k,
                max_length=request.max_length,
                dropout=dropout,
                rng_seed=seed,
            )

        if request.strategy == "beam":
            # deterministic: a single beam decode, copied S times
            first = decode("beam", dropout=False, index=0)
            return [first] * request.num_samples
        if request.strategy == "mc-dropout":
            return [decode("beam", dropout=True, index=i) for i in range(request.num_samples)]
        return [decode("sample", dropout=False, index=i) for i in range(request.num_samples)]
