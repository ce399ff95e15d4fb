"""HTTP surface: POST /generate and GET /health."""

from __future__ import annotations

from contextlib import asynccontextmanager
from typing import Literal

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .service import GenerationService, OverloadedError, ResolvedRequest


class GenerationRequest(BaseModel):
    text: str
    strategy: Literal["beam", "mc-dropout", "top-k"] = "mc-dropout"
    num_samples: int = Field(default=4, ge=1)
    beam_size: int = Field(default=8, ge=1)
    top_k: int = Field(default=50, ge=1)
    max_length: int = Field(default=64, ge=1)
    seed: int | None = None


class GenerationResponse(BaseModel):
    sentences: list[str]
    model_id: str
    request: GenerationRequest  # resolved parameters, defaults filled in
    flags: list[str] = []


def create_app(service: GenerationService | None = None, preload: bool = True) -> FastAPI:
    service = service or GenerationService()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if preload:
            service.load()
        yield

    app = FastAPI(title="genservice", lifespan=lifespan)
    app.state.service = service

    @app.get("/health")
    def health():
        payload = {"model_id": service.loaded_model_id, "ready": service.ready}
        if not service.ready:
            return JSONResponse(status_code=503, content=payload)
        return payload

    @app.post("/generate", response_model=GenerationResponse)
    def generate(request: GenerationRequest) -> GenerationResponse:
        if not request.text.strip():
            raise HTTPException(status_code=400, detail="text must be non-empty")
        if not service.ready:
            raise HTTPException(status_code=503, detail="model not loaded")
        resolved = ResolvedRequest(**request.model_dump())
        try:
            sentences, flags = service.generate(resolved)
        except OverloadedError as exc:
            raise HTTPException(status_code=429, detail=str(exc)) from exc
        except Exception as exc:  # model failure
            raise HTTPException(status_code=500, detail=f"generation failed: {exc}") from exc
        return GenerationResponse(
            sentences=sentences,
            model_id=service.loaded_model_id,
            request=request,
            flags=flags,
        )

    return app
