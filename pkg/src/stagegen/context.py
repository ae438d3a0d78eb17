"""Context budgeting: keep the recent lines verbatim, summarize the older
ones, concatenate, and crop to the token budget.

The budget defaults leave 100 tokens of generation headroom inside a
1024-token model window (924 + 100).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .backend import LmBackend
from .script import Script, ScriptLine, render_script
from .summarize import SummarizerConfig, textrank_select


@dataclass(frozen=True)
class ContextBudget:
    max_tokens: int = 924       # assembled context never exceeds this
    recent_tokens: int = 250    # window whose complete lines are kept verbatim
    summary_lines: int = 5      # older material is summarized to this many lines
    pin_setting: bool = False   # keep the setting block verbatim ahead of the summary

    def __post_init__(self) -> None:
        if not 0 < self.recent_tokens < self.max_tokens:
            raise ValueError("need 0 < recent_tokens < max_tokens")
        if self.summary_lines < 1:
            raise ValueError("summary_lines must be >= 1")


def token_length(script: Script, backend: LmBackend) -> int:
    """Tokens of the rendered script plus its trailing newline."""
    rendered = render_script(script)
    if not rendered:
        return 0
    return len(backend.encode(rendered + "\n"))


def split_recent(
    script: Script, recent_tokens: int, backend: LmBackend
) -> tuple[list[ScriptLine], list[ScriptLine]]:
    """Split lines at the first newline inside the final token window.

    Returns (older, recent): recent holds every complete line after the
    first newline token within the last ``recent_tokens`` tokens of the
    rendered script; a single line longer than the window is kept whole.
    """
    if recent_tokens < 1:
        raise ValueError("recent_tokens must be >= 1")
    if not script.lines:
        return [], []
    parts: list[tuple[int, ScriptLine | None]] = []
    if script.setting:
        for physical in script.setting.split("\n"):
            parts.append((len(backend.encode(physical)), None))
    for line in script.lines:
        parts.append((len(backend.encode(line.render())), line))
    total = sum(size for size, _ in parts) + len(parts) - 1
    if total <= recent_tokens:
        return [], list(script.lines)
    window_start = total - recent_tokens
    # newline k sits between parts k-1 and k; part k starts right after it
    position = 0
    first_kept: int | None = None
    for k, (size, _) in enumerate(parts):
        if k > 0:
            newline_at = position
            position += 1
            if newline_at >= window_start and first_kept is None:
                first_kept = k
        position += size
    if first_kept is None:
        # no newline inside the window: keep the final overlong line whole
        return list(script.lines[:-1]), [script.lines[-1]]
    recent = [line for _, line in parts[first_kept:] if line is not None]
    recent_ids = {line.id for line in recent}
    older = [line for line in script.lines if line.id not in recent_ids]
    return older, recent


def _setting_as_lines(setting: str) -> list[ScriptLine]:
    return [
        ScriptLine(i, "stage-direction", physical)
        for i, physical in enumerate(setting.split("\n"))
        if setting
    ]


def build_context(
    script: Script,
    budget: ContextBudget,
    scfg: SummarizerConfig,
    backend: LmBackend,
) -> list[int]:
    """Assemble the model input for the next generated line.

    Under budget the full rendering passes through unchanged; over budget
    the older lines are summarized, concatenated ahead of the verbatim
    recent lines, and the result is cropped at the beginning if needed.
    """
    rendered = render_script(script)
    if not rendered:
        return []
    full = backend.encode(rendered + "\n")
    if len(full) <= budget.max_tokens:
        return full
    older, recent = split_recent(script, budget.recent_tokens, backend)
    candidates: list[ScriptLine] = list(older)
    pinned: list[str] = []
    if budget.pin_setting and script.setting:
        pinned = [script.setting]
    elif script.setting:
        candidates = _setting_as_lines(script.setting) + candidates
    summary = textrank_select(candidates, budget.summary_lines, scfg) if candidates else []
    parts = pinned + [l.render() for l in summary] + [l.render() for l in recent]
    tokens = backend.encode("\n".join(parts) + "\n")
    if len(tokens) > budget.max_tokens:
        tokens = tokens[-budget.max_tokens:]
    return tokens
