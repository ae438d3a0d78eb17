"""Token sampling loop with repetition penalty, line-start cue constraint
and silent-speaker boosting.

At the start of a generated line only tokens spelling an allowed
``NAME:`` cue are permitted; a trie over the tokenized cues drives the
masking until the colon token has been emitted, after which decoding is
unconstrained until the newline token.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .backend import NEWLINE_ID, LmBackend, TokenSeq
from .errors import ConstraintStarved, ContextOverflow, NoCharacters
from .script import ScriptLine

# lines since a character last spoke; never-spoken characters get
# script length + 1 so they outrank everyone who has spoken
SpeakerRecency = Mapping[str, int]


@dataclass(frozen=True)
class SamplerConfig:
    temperature: float = 0.9
    top_k: int = 50  # 0 disables the filter
    repetition_penalty: float = 1.01
    max_new_tokens: int = 100
    boost_coefficient: float = 0.1  # logits per silent line
    seed: int = 0
    greedy: bool = False

    def __post_init__(self) -> None:
        if self.repetition_penalty < 1.0:
            raise ValueError("repetition_penalty must be >= 1")
        if self.max_new_tokens < 1:
            raise ValueError("max_new_tokens must be >= 1")
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")


@dataclass
class TrieNode:
    children: dict[int, "TrieNode"] = field(default_factory=dict)
    character: str | None = None


class CueTrie:
    """Prefix tree over the tokenized ``NAME:`` cues of the allowed
    characters; each leaf is tagged with its character."""

    def __init__(self) -> None:
        self.root = TrieNode()
        self.first_token_of: dict[str, int] = {}

    def insert(self, tokens: Sequence[int], character: str) -> None:
        if not tokens:
            raise ValueError(f"cue for {character!r} tokenized to nothing")
        node = self.root
        for tid in tokens:
            node = node.children.setdefault(tid, TrieNode())
        node.character = character
        self.first_token_of[character] = tokens[0]


def build_cue_trie(characters: Sequence[str], backend: LmBackend) -> CueTrie:
    if not characters:
        raise NoCharacters("need at least one allowed character")
    trie = CueTrie()
    for name in characters:
        trie.insert(backend.encode(name.strip() + ":"), name)
    return trie


def apply_repetition_penalty(
    logits: np.ndarray, context: TokenSeq, penalty: float
) -> np.ndarray:
    """CTRL-style rule: for every token id present in the context, divide
    positive logits by the penalty and multiply non-positive ones by it."""
    if penalty == 1.0:
        return logits
    out = logits.copy()
    seen = [tid for tid in set(context) if tid < len(out)]
    vals = out[seen]
    out[seen] = np.where(vals > 0, vals / penalty, vals * penalty)
    return out


def apply_speaker_boost(
    logits: np.ndarray, trie: CueTrie, recency: SpeakerRecency, b: float
) -> np.ndarray:
    """Add b * lines_since_last_spoken to the first cue token of each
    character; characters sharing a first token take the maximum bonus."""
    if b == 0:
        return logits
    bonus: dict[int, float] = {}
    for name, tid in trie.first_token_of.items():
        gain = b * recency.get(name, 0)
        if gain > bonus.get(tid, -np.inf):
            bonus[tid] = gain
    out = logits.copy()
    for tid, gain in bonus.items():
        if tid < len(out):
            out[tid] += gain
    return out


def constrain_line_start(logits: np.ndarray, node: TrieNode) -> np.ndarray:
    """Mask every id that is not a child of the current trie position."""
    allowed = [tid for tid in node.children if tid < len(logits)]
    if not allowed or not np.isfinite(logits[allowed]).any():
        raise ConstraintStarved("no allowed cue token has a finite logit")
    out = np.full_like(logits, -np.inf)
    out[allowed] = logits[allowed]
    return out


def _sample(logits: np.ndarray, cfg: SamplerConfig, rng: np.random.Generator) -> int:
    scaled = logits / cfg.temperature
    if cfg.greedy:
        return int(np.argmax(scaled))
    if cfg.top_k and np.isfinite(scaled).sum() > cfg.top_k:
        cutoff = np.sort(scaled)[-cfg.top_k]
        scaled = np.where(scaled >= cutoff, scaled, -np.inf)
    scaled = scaled - scaled.max()
    probs = np.exp(scaled)
    probs /= probs.sum()
    return int(rng.choice(len(probs), p=probs))


@dataclass(frozen=True)
class GenerationResult:
    line: ScriptLine
    tokens: tuple[int, ...]
    truncated: bool


def compute_recency(lines: Sequence[ScriptLine], characters: Sequence[str]) -> dict[str, int]:
    """Lines since each character last spoke over the given line history."""
    recency = {name: len(lines) + 1 for name in characters}
    for back, line in enumerate(reversed(lines)):
        if line.kind == "cue" and line.speaker in recency:
            recency[line.speaker] = min(recency[line.speaker], back)
    return recency


def generate_line(
    context: TokenSeq,
    characters: Sequence[str],
    recency: SpeakerRecency,
    cfg: SamplerConfig,
    backend: LmBackend,
    rng: np.random.Generator,
    line_id: int = 0,
) -> GenerationResult:
    """Sample one complete cue line from the backend.

    Stops at the newline token or after max_new_tokens, in which case the
    result is flagged truncated.
    """
    if len(context) > backend.context_limit - cfg.max_new_tokens:
        raise ContextOverflow(
            f"context of {len(context)} tokens leaves no room for "
            f"{cfg.max_new_tokens} new tokens within {backend.context_limit}"
        )
    trie = build_cue_trie(characters, backend)
    node: TrieNode | None = trie.root
    speaker: str | None = None
    generated: list[int] = []
    truncated = True
    ctx = list(context)
    for step in range(cfg.max_new_tokens):
        want = list(node.children) if node is not None else None
        logits = np.asarray(backend.next_logits(ctx, want), dtype=np.float64)
        logits = apply_repetition_penalty(logits, ctx, cfg.repetition_penalty)
        if node is not None:
            if step == 0:
                logits = apply_speaker_boost(logits, trie, recency, cfg.boost_coefficient)
            logits = constrain_line_start(logits, node)
        tid = _sample(logits, cfg, rng)
        generated.append(tid)
        ctx.append(tid)
        if node is not None:
            node = node.children[tid]
            if node.character is not None and not node.children:
                speaker = node.character
                node = None
        if tid == NEWLINE_ID:
            truncated = False
            break
    body = generated[:-1] if generated and generated[-1] == NEWLINE_ID else generated
    text = backend.decode(body)
    if speaker is None:
        head, sep, tail = text.partition(":")
        if sep and head.strip():
            speaker, text = head.strip(), tail.removeprefix(" ")
        else:
            raise ConstraintStarved("generation ended before completing a cue")
    else:
        _, _, tail = text.partition(":")
        text = tail.removeprefix(" ")
    line = ScriptLine(line_id, "cue", text, speaker, "generated")
    return GenerationResult(line=line, tokens=tuple(generated), truncated=truncated)
