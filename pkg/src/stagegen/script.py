"""Theatre script parsing, rendering and line normalization.

A script is a possibly-empty setting block followed by an ordered list of
lines.  A cue line has the form ``NAME: utterance`` where the first colon
on the physical line splits the speaker name from the utterance; any other
physical line after the first cue is a stage direction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Literal

from .errors import EmptyScript

Kind = Literal["cue", "stage-direction"]
Origin = Literal["prompt", "generated", "manual"]

_WS_RUN = re.compile(r"\s+")


@dataclass(frozen=True)
class ScriptLine:
    """One physical line of a script.

    ``speaker`` is present exactly when ``kind == "cue"``.  ``text`` never
    contains a newline.
    """

    id: int
    kind: Kind
    text: str
    speaker: str | None = None
    origin: Origin = "prompt"

    def __post_init__(self) -> None:
        if "\n" in self.text:
            raise ValueError("line text must not contain newlines")
        if self.kind == "cue" and not self.speaker:
            raise ValueError("cue lines need a speaker")

    def render(self) -> str:
        if self.kind == "cue":
            return f"{self.speaker}: {self.text}" if self.text else f"{self.speaker}:"
        return self.text


@dataclass(frozen=True)
class Script:
    """Setting block plus ordered lines; line ids strictly increase."""

    setting: str = ""
    lines: tuple[ScriptLine, ...] = ()

    def __post_init__(self) -> None:
        ids = [line.id for line in self.lines]
        if any(b <= a for a, b in zip(ids, ids[1:])):
            raise ValueError("line ids must be strictly increasing")


def _split_cue(raw: str) -> tuple[str, str] | None:
    """Return (speaker, utterance) if the physical line is a cue, else None."""
    head, sep, tail = raw.partition(":")
    if not sep:
        return None
    name = head.strip()
    if not name:
        return None
    return name, tail.removeprefix(" ")


def parse_script(text: str, origin: Origin = "prompt") -> Script:
    """Parse script text into a Script.

    Contiguous non-cue lines before the first cue become the setting block;
    non-cue lines after the first cue become stage directions.
    """
    if not text.strip():
        raise EmptyScript("script text is empty")
    raw_lines = text.removesuffix("\n").split("\n")
    setting_parts: list[str] = []
    lines: list[ScriptLine] = []
    next_id = 0
    for raw in raw_lines:
        cue = _split_cue(raw)
        if cue is not None:
            speaker, utterance = cue
            lines.append(ScriptLine(next_id, "cue", utterance, speaker, origin))
            next_id += 1
        elif not lines:
            setting_parts.append(raw)
        else:
            lines.append(ScriptLine(next_id, "stage-direction", raw, None, origin))
            next_id += 1
    return Script(setting="\n".join(setting_parts), lines=tuple(lines))


def render_script(script: Script) -> str:
    """Render back to text; inverse of parse_script on canonical input."""
    parts: list[str] = []
    if script.setting:
        parts.append(script.setting)
    parts.extend(line.render() for line in script.lines)
    return "\n".join(parts)


def extract_characters(script: Script) -> list[str]:
    """Unique cue speakers, in order of first appearance."""
    seen: dict[str, None] = {}
    for line in script.lines:
        if line.kind == "cue" and line.speaker not in seen:
            seen[line.speaker] = None
    return list(seen)


def normalize_line(text: str) -> str:
    """Case-fold, trim, and collapse internal whitespace for comparisons."""
    return _WS_RUN.sub(" ", text.strip()).casefold()


def renumber(lines: Iterable[ScriptLine], start: int = 0) -> tuple[ScriptLine, ...]:
    """Reassign ids start, start+1, ... keeping everything else."""
    return tuple(replace(line, id=start + i) for i, line in enumerate(lines))
