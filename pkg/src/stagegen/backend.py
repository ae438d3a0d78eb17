"""Language-model backends: tokenizer plus next-token logits.

Two deterministic in-process mocks (HashLM, ScriptedLM) share a whitespace
tokenizer with a dynamically grown vocabulary; RemoteLM speaks the JSON
wire protocol of an external inference service.
"""

from __future__ import annotations

import hashlib
import struct
import threading
from dataclasses import dataclass
from typing import Protocol, Sequence, runtime_checkable

import httpx
import numpy as np

from .errors import BackendUnavailable, ContextOverflow, InvalidToken

NEWLINE_ID = 0

TokenSeq = Sequence[int]


@runtime_checkable
class LmBackend(Protocol):
    """Tokenizer plus next-token distribution provider."""

    context_limit: int

    @property
    def vocab_size(self) -> int: ...

    def encode(self, text: str) -> list[int]: ...

    def decode(self, tokens: TokenSeq) -> str: ...

    def next_logits(self, context: TokenSeq, want: TokenSeq | None = None) -> np.ndarray: ...


class WhitespaceVocab:
    """Dynamically grown word vocabulary with a reserved newline token."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._ids: dict[str, int] = {"\n": NEWLINE_ID}
        self._words: list[str] = ["\n"]

    def __len__(self) -> int:
        return len(self._words)

    def id_for(self, word: str) -> int:
        with self._lock:
            tid = self._ids.get(word)
            if tid is None:
                tid = len(self._words)
                self._ids[word] = tid
                self._words.append(word)
            return tid

    def word_for(self, tid: int) -> str:
        if not 0 <= tid < len(self._words):
            raise InvalidToken(f"token id {tid} out of range")
        return self._words[tid]


class _MockLm:
    """Shared encode/decode for the in-process mock backends."""

    def __init__(self, vocab: WhitespaceVocab | None = None, context_limit: int = 1024):
        self.vocab = vocab if vocab is not None else WhitespaceVocab()
        self.context_limit = context_limit

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    def encode(self, text: str) -> list[int]:
        tokens: list[int] = []
        for i, segment in enumerate(text.split("\n")):
            if i:
                tokens.append(NEWLINE_ID)
            tokens.extend(self.vocab.id_for(word) for word in segment.split())
        return tokens

    def decode(self, tokens: TokenSeq) -> str:
        out: list[str] = []
        prev_word = False
        for tid in tokens:
            word = self.vocab.word_for(tid)
            if tid == NEWLINE_ID:
                out.append("\n")
                prev_word = False
            else:
                if prev_word:
                    out.append(" ")
                out.append(word)
                prev_word = True
        return "".join(out)

    def _check_length(self, context: TokenSeq) -> None:
        if len(context) > self.context_limit:
            raise ContextOverflow(
                f"context of {len(context)} tokens exceeds limit {self.context_limit}"
            )


def _unit_hash(tail: TokenSeq, token: int) -> float:
    """Stable hash of (context tail, candidate token) mapped to [0, 1)."""
    payload = struct.pack(f"<{len(tail) + 1}q", *tail, token)
    digest = hashlib.blake2b(payload, digest_size=8).digest()
    return int.from_bytes(digest, "little") / 2.0**64


class HashLM(_MockLm):
    """Pure hash-based logits; the newline token gets a fixed additive bias
    so that generated lines terminate."""

    def __init__(
        self,
        vocab: WhitespaceVocab | None = None,
        context_limit: int = 1024,
        hash_window: int = 8,
        newline_bias: float = 0.5,
    ):
        super().__init__(vocab, context_limit)
        self.hash_window = hash_window
        self.newline_bias = newline_bias

    def next_logits(self, context: TokenSeq, want: TokenSeq | None = None) -> np.ndarray:
        self._check_length(context)
        tail = tuple(context[-self.hash_window:])
        logits = np.fromiter(
            (_unit_hash(tail, v) for v in range(self.vocab_size)),
            dtype=np.float64,
            count=self.vocab_size,
        )
        logits[NEWLINE_ID] += self.newline_bias
        return logits


@dataclass(frozen=True)
class ScriptedRule:
    """When the context ends with ``pattern`` (+ an already-emitted prefix
    of ``forced``), force the next token of ``forced``."""

    pattern: tuple[int, ...]
    forced: tuple[int, ...]


class ScriptedLM(_MockLm):
    """Forces configured token sequences after matching context suffixes;
    unmatched contexts fall back to HashLM logits."""

    FORCED_LOGIT = 1e4

    def __init__(
        self,
        rules: Sequence[ScriptedRule],
        vocab: WhitespaceVocab | None = None,
        context_limit: int = 1024,
    ):
        super().__init__(vocab, context_limit)
        self.rules = list(rules)
        self._fallback = HashLM(self.vocab, context_limit)

    @classmethod
    def cycle(
        cls,
        lines: Sequence[str],
        vocab: WhitespaceVocab | None = None,
        context_limit: int = 1024,
    ) -> "ScriptedLM":
        """Backend that emits the given lines in rotation, keyed by the
        previously completed line in the context."""
        lm = cls([], vocab, context_limit)
        encoded = [tuple(lm.encode(line.rstrip("\n"))) for line in lines]
        for i, toks in enumerate(encoded):
            nxt = encoded[(i + 1) % len(encoded)]
            lm.rules.append(ScriptedRule(toks + (NEWLINE_ID,), nxt + (NEWLINE_ID,)))
        lm.rules.append(ScriptedRule((NEWLINE_ID,), encoded[0] + (NEWLINE_ID,)))
        return lm

    def _forced_token(self, context: TokenSeq) -> int | None:
        ctx = tuple(context)
        for rule in self.rules:
            for emitted in range(len(rule.forced) - 1, -1, -1):
                probe = rule.pattern + rule.forced[:emitted]
                if probe and ctx[-len(probe):] == probe:
                    return rule.forced[emitted]
        return None

    def next_logits(self, context: TokenSeq, want: TokenSeq | None = None) -> np.ndarray:
        self._check_length(context)
        logits = self._fallback.next_logits(context, want)
        forced = self._forced_token(context)
        if forced is not None:
            logits[forced] = self.FORCED_LOGIT
        return logits


class RemoteLM:
    """Client for a remote inference service (JSON over HTTP).

    POST /v1/logits {tokens, want?, top_k} -> {logits: [[id, value], ...],
    model, context_limit}; POST /v1/encode {text} -> {tokens};
    POST /v1/decode {tokens} -> {text}.  Token ids absent from the returned
    top-k are treated as -inf; callers pass ``want`` for ids that must be
    present (cue constraint masking).
    """

    def __init__(
        self,
        base_url: str = "",
        top_k: int = 512,
        timeout: float = 30.0,
        retries: int = 2,
        client: httpx.Client | None = None,
    ):
        self._client = client or httpx.Client(base_url=base_url, timeout=timeout)
        self.top_k = top_k
        self.retries = retries
        self.context_limit = 1024
        self._max_id = 0
        self._lock = threading.Lock()

    @property
    def vocab_size(self) -> int:
        return self._max_id + 1

    def _post(self, path: str, payload: dict) -> dict:
        last: Exception | None = None
        for attempt in range(1, self.retries + 1):
            try:
                resp = self._client.post(path, json=payload)
                resp.raise_for_status()
                return resp.json()
            except httpx.HTTPError as exc:
                last = exc
        raise BackendUnavailable(f"LM service unreachable: {last}", attempts=self.retries)

    def encode(self, text: str) -> list[int]:
        tokens = self._post("/v1/encode", {"text": text})["tokens"]
        if tokens:
            self._note_ids(tokens)
        return tokens

    def decode(self, tokens: TokenSeq) -> str:
        return self._post("/v1/decode", {"tokens": list(tokens)})["text"]

    def _note_ids(self, ids: Sequence[int]) -> None:
        with self._lock:
            self._max_id = max(self._max_id, max(ids))

    def next_logits(self, context: TokenSeq, want: TokenSeq | None = None) -> np.ndarray:
        if len(context) > self.context_limit:
            raise ContextOverflow(
                f"context of {len(context)} tokens exceeds limit {self.context_limit}"
            )
        payload: dict = {"tokens": list(context), "top_k": self.top_k}
        if want:
            payload["want"] = list(want)
        body = self._post("/v1/logits", payload)
        self.context_limit = body.get("context_limit", self.context_limit)
        pairs = body["logits"]
        if pairs:
            self._note_ids([tid for tid, _ in pairs])
        logits = np.full(self.vocab_size, -np.inf)
        for tid, value in pairs:
            logits[tid] = value
        return logits
