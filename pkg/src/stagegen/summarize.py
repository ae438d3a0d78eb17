"""Extractive summarization of script lines: similarity graph over whole
lines, weighted PageRank, top-n selection preserving original order."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import AbstractSet, Sequence

import numpy as np

from .script import ScriptLine, normalize_line


@dataclass(frozen=True)
class SummarizerConfig:
    damping: float = 0.85
    tolerance: float = 1e-6
    max_iterations: int = 100
    max_phrases: int = 100  # cap on distinct content words per line

    def __post_init__(self) -> None:
        if not 0 < self.damping < 1:
            raise ValueError("damping must be in (0, 1)")


@lru_cache(maxsize=1)
def load_stopwords() -> frozenset[str]:
    data = resources.files("stagegen.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(w for w in data.split() if w)


def content_words(
    line: ScriptLine,
    stopwords: AbstractSet[str],
    exclude: AbstractSet[str] = frozenset(),
    max_phrases: int = 100,
) -> frozenset[str]:
    """Distinct normalized words minus stop words and excluded names,
    capped at max_phrases in order of first appearance."""
    kept: dict[str, None] = {}
    for word in normalize_line(line.text).split():
        word = word.strip(".,!?;:\"'()")
        if not word or word in stopwords or word in exclude:
            continue
        if word not in kept:
            kept[word] = None
            if len(kept) >= max_phrases:
                break
    return frozenset(kept)


def _pair_similarity(wa: AbstractSet[str], wb: AbstractSet[str]) -> float:
    shared = len(wa & wb)
    if shared == 0:
        return 0.0
    denom = math.log(len(wa)) + math.log(len(wb))
    if len(wa) <= 1 or len(wb) <= 1 or denom <= 0:
        return shared / (len(wa) + len(wb))
    return shared / denom


def line_similarity(
    a: ScriptLine,
    b: ScriptLine,
    stopwords: AbstractSet[str] | None = None,
    exclude: AbstractSet[str] = frozenset(),
    max_phrases: int = 100,
) -> float:
    """Shared content words over the log-size sum of the two word sets;
    degenerate lines fall back to shared / (|Wa| + |Wb|)."""
    stop = load_stopwords() if stopwords is None else stopwords
    wa = content_words(a, stop, exclude, max_phrases)
    wb = content_words(b, stop, exclude, max_phrases)
    return _pair_similarity(wa, wb)


def build_line_graph(
    lines: Sequence[ScriptLine],
    cfg: SummarizerConfig,
    stopwords: AbstractSet[str] | None = None,
) -> np.ndarray:
    """Symmetric similarity weights with zero diagonal.

    Cue names of the given lines are excluded from the content words so
    that every exchange between the same two speakers does not look alike.
    """
    stop = load_stopwords() if stopwords is None else stopwords
    exclude = {normalize_line(l.speaker) for l in lines if l.kind == "cue"}
    sets = [content_words(l, stop, exclude, cfg.max_phrases) for l in lines]
    n = len(lines)
    weights = np.zeros((n, n))
    vocab = sorted(set().union(*sets)) if sets else []
    index = {w: i for i, w in enumerate(vocab)}
    if vocab:
        incidence = np.zeros((n, len(vocab)))
        for i, words in enumerate(sets):
            for w in words:
                incidence[i, index[w]] = 1.0
        shared = incidence @ incidence.T
        sizes = incidence.sum(axis=1)
        log_denom = np.where(sizes > 0, np.log(np.maximum(sizes, 1)), 0.0)
        denom = log_denom[:, None] + log_denom[None, :]
        fallback = sizes[:, None] + sizes[None, :]
        use_fallback = (sizes[:, None] <= 1) | (sizes[None, :] <= 1) | (denom <= 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            weights = np.where(
                use_fallback,
                np.divide(shared, fallback, out=np.zeros((n, n)), where=fallback > 0),
                np.divide(shared, denom, out=np.zeros((n, n)), where=denom > 0),
            )
        weights[shared == 0] = 0.0
        np.fill_diagonal(weights, 0.0)
    return weights


def pagerank(weights: np.ndarray, cfg: SummarizerConfig | None = None) -> np.ndarray:
    """Weighted PageRank scores via fixed-point iteration from all ones.

    S(i) = (1 - d) + d * sum_j w(j, i) / sum_k w(j, k) * S(j); nodes with
    no outgoing weight contribute nothing and themselves score (1 - d).
    """
    cfg = cfg or SummarizerConfig()
    n = weights.shape[0]
    out_weight = weights.sum(axis=1)
    norm = np.zeros_like(weights)
    connected = out_weight > 0
    norm[connected] = weights[connected] / out_weight[connected, None]
    scores = np.ones(n)
    for _ in range(cfg.max_iterations):
        updated = (1 - cfg.damping) + cfg.damping * (norm.T @ scores)
        if np.max(np.abs(updated - scores)) < cfg.tolerance:
            scores = updated
            break
        scores = updated
    return scores


def textrank_select(
    lines: Sequence[ScriptLine],
    n: int,
    cfg: SummarizerConfig | None = None,
    stopwords: AbstractSet[str] | None = None,
) -> list[ScriptLine]:
    """Top-n lines by rank, ties to the earlier line, in original order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if len(lines) <= n:
        return list(lines)
    cfg = cfg or SummarizerConfig()
    scores = pagerank(build_line_graph(lines, cfg, stopwords), cfg)
    ranked = sorted(range(len(lines)), key=lambda i: (-scores[i], i))
    chosen = sorted(ranked[:n])
    return [lines[i] for i in chosen]
