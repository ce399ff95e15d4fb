"""Sequence decoding over a step function.

A step function maps (last token id, decoder state) to (log-probabilities
over the vocabulary, next state). Both decoders forbid the end token until
``min_length`` tokens have been emitted, so a freshly initialized model
cannot produce empty output by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import torch

StepFn = Callable[[int, torch.Tensor], tuple[torch.Tensor, torch.Tensor]]


@dataclass
class _Beam:
    tokens: list[int]
    logprob: float
    state: torch.Tensor
    done: bool


def beam_search(
    step: StepFn,
    start_state: torch.Tensor,
    bos: int,
    eos: int,
    beam_size: int,
    max_length: int,
    min_length: int = 3,
) -> list[int]:
    """Deterministic beam search; returns token ids without BOS/EOS."""
    beams = [_Beam([bos], 0.0, start_state, False)]
    for position in range(max_length):
        live = [b for b in beams if not b.done]
        if not live:
            break
        candidates = [b for b in beams if b.done]
        for beam in live:
            logprobs, state = step(beam.tokens[-1], beam.state)
            if position < min_length:
                logprobs = logprobs.clone()
                logprobs[eos] = float("-inf")
            width = min(beam_size, logprobs.shape[-1])
            top = torch.topk(logprobs, width)
            for lp, token in zip(top.values.tolist(), top.indices.tolist()):
                candidates.append(
                    _Beam(beam.tokens + [token], beam.logprob + lp, state, token == eos)
                )
        candidates.sort(key=lambda b: -b.logprob)  # stable: ties keep insertion order
        beams = candidates[:beam_size]
    best = max(beams, key=lambda b: b.logprob)
    return [t for t in best.tokens[1:] if t != eos]


def top_k_sample(
    step: StepFn,
    start_state: torch.Tensor,
    bos: int,
    eos: int,
    k: int,
    max_length: int,
    min_length: int = 3,
) -> list[int]:
    """Sample each next token from the k most likely candidates.

    Draws come from torch's global RNG; seed it beforehand for
    reproducibility.
    """
    state = start_state
    last = bos
    out: list[int] = []
    for position in range(max_length):
        logprobs, state = step(last, state)
        if position < min_length:
            logprobs = logprobs.clone()
            logprobs[eos] = float("-inf")
        width = min(k, logprobs.shape[-1])
        top = torch.topk(logprobs, width)
        choice = int(torch.multinomial(torch.softmax(top.values, dim=-1), 1).item())
        token = int(top.indices[choice])
        if token == eos:
            break
        out.append(token)
        last = token
    return out
