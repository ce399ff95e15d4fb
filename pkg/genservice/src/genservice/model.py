"""Backends that turn a passage into short generated sentences.

``builtin:tiny`` is a self-contained GRU encoder-decoder with seeded random
weights over hashed word buckets. It has real dropout layers, so it
exercises the full decoding surface (beam search, MC-dropout perturbation,
top-k sampling) on CPU in milliseconds, with no model downloads. Generated
tokens map back to words of the input passage (copy-heavy, plus a small
built-in lexicon).

``hf:<path-or-id>`` wraps any local/hub ``transformers`` seq2seq
checkpoint behind the same interface; the dependency is imported only if
such a model id is requested.
"""

from __future__ import annotations

import hashlib
import re

import torch
from torch import nn

from .decoding import beam_search, top_k_sample

BOS = 0
EOS = 1
_OFFSET = 2  # first hash bucket

_WORD_RE = re.compile(r"[^\W_]+")

# generic words occupying fixed buckets; decodes may emit them even when
# the corresponding bucket never occurs in the input
LEXICON = (
    "about above after again all also another any around because before between "
    "both during each even first from great group hand high home just know large "
    "last life little long made many more most much never new now old only other "
    "over own part people place point right same small some state still system "
    "thing time under very water well where while world year young"
).split()


def words_of(text: str) -> list[str]:
    return [w.lower() for w in _WORD_RE.findall(text)]


def bucket_of(word: str, buckets: int) -> int:
    digest = hashlib.sha1(word.encode("utf-8")).digest()
    return _OFFSET + int.from_bytes(digest[:8], "big") % buckets


class TinySeq2Seq(nn.Module):
    """GRU encoder-decoder over hash buckets, deterministically initialized."""

    def __init__(
        self,
        vocab_size: int = 1024,
        embed_dim: int = 32,
        hidden_dim: int = 64,
        dropout_p: float = 0.1,
        init_seed: int = 20240813,
    ) -> None:
        super().__init__()
        self.vocab_size = vocab_size
        self.embedding = nn.Embedding(vocab_size, embed_dim)
        self.encoder = nn.GRU(embed_dim, hidden_dim, batch_first=True)
        self.decoder = nn.GRUCell(embed_dim + hidden_dim, hidden_dim)
        self.projection = nn.Linear(hidden_dim, vocab_size)
        self.embed_dropout = nn.Dropout(dropout_p)
        self.state_dropout = nn.Dropout(dropout_p)
        generator = torch.Generator().manual_seed(init_seed)
        with torch.no_grad():
            for parameter in self.parameters():
                values = torch.rand(parameter.shape, generator=generator)
                parameter.copy_((values - 0.5) * 0.6)

    def encode(self, token_ids: list[int]) -> tuple[torch.Tensor, torch.Tensor]:
        """Mean-pooled context vector and the initial decoder state."""
        if not token_ids:
            token_ids = [BOS]
        ids = torch.tensor(token_ids, dtype=torch.long).unsqueeze(0)
        embedded = self.embed_dropout(self.embedding(ids))
        outputs, final = self.encoder(embedded)
        return outputs.mean(dim=1).squeeze(0), final.squeeze(0).squeeze(0)

    def step(
        self, token: int, state: torch.Tensor, context: torch.Tensor
    ) -> tuple[torch.Tensor, torch.Tensor]:
        """Raw next-token logits; the caller applies masking/normalization."""
        embedded = self.embed_dropout(self.embedding(torch.tensor([token])))
        joint = torch.cat([embedded.squeeze(0), context])
        next_state = self.decoder(joint.unsqueeze(0), state.unsqueeze(0)).squeeze(0)
        logits = self.projection(self.state_dropout(next_state))
        return logits, next_state


class TinyBackend:
    """Self-contained default model."""

    def __init__(self, dropout_p: float = 0.1, init_seed: int = 20240813) -> None:
        self.model_id = "builtin:tiny"
        self.net = TinySeq2Seq(dropout_p=dropout_p, init_seed=init_seed)
        self.net.eval()
        buckets = self.net.vocab_size - _OFFSET
        self._lexicon_map: dict[int, str] = {}
        for word in LEXICON:
            self._lexicon_map.setdefault(bucket_of(word, buckets), word)

    def generate_one(
        self,
        text: str,
        *,
        mode: str,
        beam_size: int,
        top_k: int,
        max_length: int,
        dropout: bool,
        rng_seed: int | None,
    ) -> str:
        if rng_seed is not None:
            torch.manual_seed(rng_seed)
        buckets = self.net.vocab_size - _OFFSET
        input_words = words_of(text)[:128]
        token_ids = [bucket_of(w, buckets) for w in input_words]
        word_map = dict(self._lexicon_map)
        for word in input_words:  # input vocabulary overrides the lexicon
            word_map[bucket_of(word, buckets)] = word

        # decoding is constrained to buckets that map back to a word
        mask = torch.full((self.net.vocab_size,), float("-inf"))
        mask[list(word_map)] = 0.0
        mask[EOS] = 0.0

        self.net.train(dropout)
        try:
            with torch.no_grad():
                context, state = self.net.encode(token_ids)

                def step(token: int, current: torch.Tensor):
                    logits, next_state = self.net.step(token, current, context)
                    return torch.log_softmax(logits + mask, dim=-1), next_state

                if mode == "beam":
                    ids = beam_search(step, state, BOS, EOS, beam_size, max_length)
                elif mode == "sample":
                    ids = top_k_sample(step, state, BOS, EOS, top_k, max_length)
                else:
                    raise ValueError(f"unknown decode mode {mode!r}")
        finally:
            self.net.eval()

        chosen = [word_map[t] for t in ids if t in word_map]
        return " ".join(chosen) + "." if chosen else ""


class HFBackend:
    """Adapter for a local or hub ``transformers`` seq2seq checkpoint."""

    def __init__(self, path_or_id: str) -> None:
        from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

        self.model_id = f"hf:{path_or_id}"
        self.tokenizer = AutoTokenizer.from_pretrained(path_or_id)
        self.model = AutoModelForSeq2SeqLM.from_pretrained(path_or_id)
        self.model.eval()

    def generate_one(
        self,
        text: str,
        *,
        mode: str,
        beam_size: int,
        top_k: int,
        max_length: int,
        dropout: bool,
        rng_seed: int | None,
    ) -> str:
        if rng_seed is not None:
            torch.manual_seed(rng_seed)
        # train mode is the MC switch: transformer dropout keys off module.training
        self.model.train(dropout)
        try:
            inputs = self.tokenizer([text], return_tensors="pt", truncation=True, max_length=512)
            options = {"max_new_tokens": max_length, "min_new_tokens": 2}
            if mode == "beam":
                options.update(num_beams=beam_size, do_sample=False)
            elif mode == "sample":
                options.update(do_sample=True, top_k=top_k, num_beams=1)
            else:
                raise ValueError(f"unknown decode mode {mode!r}")
            with torch.no_grad():
                output = self.model.generate(**inputs, **options)
        finally:
            self.model.eval()
        return self.tokenizer.decode(output[0], skip_special_tokens=True).strip()


def load_backend(model_id: str, dropout_p: float = 0.1):
    if model_id == "builtin:tiny":
        return TinyBackend(dropout_p=dropout_p)
    if model_id.startswith("hf:"):
        return HFBackend(model_id[len("hf:"):])
    raise ValueError(f"unknown model id {model_id!r} (use builtin:tiny or hf:<path-or-id>)")
