"""Interactive session state machine.

A session owns the prompt script, the accepted generated/manual lines, a
per-line translation table and an append-only event log.  Generation
retries on duplicate lines with the retry index folded into the rng
stream, so replaying the event log against the same backend reconstructs
the identical session.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .backend import LmBackend
from .context import ContextBudget, build_context
from .decode import SamplerConfig, compute_recency, generate_line
from .errors import (
    DuplicateExhausted,
    InvalidText,
    NoCharacters,
    PromptLineImmutable,
    TranslationUnavailable,
    UnknownLine,
)
from .script import (
    Script,
    ScriptLine,
    extract_characters,
    normalize_line,
    parse_script,
    render_script,
)
from .summarize import SummarizerConfig
from .translate import MtClient, TranslatedLine, translate_line

Clock = Callable[[], float]


@dataclass(frozen=True)
class RetryPolicy:
    max_retries: int = 5       # duplicate retries before giving up
    duplicate_window: int = 6  # lines a new line must not repeat

    def __post_init__(self) -> None:
        if self.max_retries < 1 or self.duplicate_window < 1:
            raise ValueError("max_retries and duplicate_window must be >= 1")


@dataclass(frozen=True)
class SessionConfigs:
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    budget: ContextBudget = field(default_factory=ContextBudget)
    summarizer: SummarizerConfig = field(default_factory=SummarizerConfig)
    retry: RetryPolicy = field(default_factory=RetryPolicy)

    @classmethod
    def from_overrides(cls, overrides: dict | None) -> "SessionConfigs":
        """Build configs from a flat key -> value mapping of knob names."""
        overrides = dict(overrides or {})

        def pick(config_cls):
            names = config_cls.__dataclass_fields__
            return config_cls(**{k: overrides[k] for k in names if k in overrides})

        return cls(
            sampler=pick(SamplerConfig),
            budget=pick(ContextBudget),
            summarizer=pick(SummarizerConfig),
            retry=pick(RetryPolicy),
        )


class Session:
    """One interactive script-writing session."""

    def __init__(
        self,
        session_id: str,
        prompt: Script,
        configs: SessionConfigs,
        backend: LmBackend,
        mt: MtClient,
        clock: Clock | None = None,
        name_table: dict[str, str] | None = None,
    ):
        characters = extract_characters(prompt)
        if not characters:
            raise NoCharacters("prompt must contain at least one cue line")
        self.id = session_id
        self.prompt = prompt
        self.configs = configs
        self.backend = backend
        self.mt = mt
        self.clock: Clock = clock or time.time
        self.characters: list[str] = characters
        self.name_table: dict[str, str] = dict(name_table or {})
        self.lines: list[ScriptLine] = []
        self.translations: dict[int, TranslatedLine] = {}
        self.events: list[dict] = []
        self.status = "idle"
        self._draws = 0
        self._next_id = (prompt.lines[-1].id + 1) if prompt.lines else 0

    # -- helpers -----------------------------------------------------------

    def full_script(self) -> Script:
        return Script(self.prompt.setting, tuple(self.prompt.lines) + tuple(self.lines))

    def recency(self) -> dict[str, int]:
        return compute_recency(self.full_script().lines, self.characters)

    def _log(self, action: str, **payload) -> None:
        self.events.append({"timestamp": self.clock(), "action": action, **payload})

    def _translate(self, line: ScriptLine) -> None:
        try:
            self.translations[line.id] = translate_line(line, self.name_table, self.mt)
        except TranslationUnavailable:
            cue = self.name_table.get(line.speaker, line.speaker) if line.kind == "cue" else None
            self.translations[line.id] = TranslatedLine(line, line.text, cue, ok=False)

    # -- construction ------------------------------------------------------

    @classmethod
    def create(
        cls,
        session_id: str,
        prompt_text: str,
        backend: LmBackend,
        mt: MtClient,
        configs: SessionConfigs | None = None,
        clock: Clock | None = None,
        name_table: dict[str, str] | None = None,
    ) -> "Session":
        prompt = parse_script(prompt_text)
        session = cls(
            session_id, prompt, configs or SessionConfigs(), backend, mt,
            clock=clock, name_table=name_table,
        )
        session._log(
            "create",
            prompt=prompt_text,
            seed=session.configs.sampler.seed,
            configs=_configs_dict(session.configs),
            name_table=dict(session.name_table),
        )
        for line in prompt.lines:
            session._translate(line)
        return session

    # -- mutations ---------------------------------------------------------

    def generate_next(self) -> ScriptLine:
        """Generate, duplicate-check, accept and translate the next line."""
        context = build_context(
            self.full_script(), self.configs.budget, self.configs.summarizer, self.backend
        )
        window = [
            normalize_line(l.render())
            for l in self.full_script().lines[-self.configs.retry.duplicate_window:]
        ]
        recency = self.recency()
        attempts = 0
        for _ in range(self.configs.retry.max_retries):
            rng = np.random.default_rng([self.configs.sampler.seed, self._draws])
            self._draws += 1
            attempts += 1
            result = generate_line(
                context, self.characters, recency, self.configs.sampler,
                self.backend, rng, line_id=self._next_id,
            )
            if normalize_line(result.line.render()) not in window:
                line = result.line
                self.lines.append(line)
                self._next_id += 1
                self._translate(line)
                self._log("generate", line_id=line.id, attempts=attempts)
                return line
        self._log("generate_failed", attempts=attempts)
        raise DuplicateExhausted(attempts)

    def insert_manual(self, speaker: str, text: str) -> ScriptLine:
        """Append a human-entered cue line; new speakers join the cast."""
        speaker = speaker.strip()
        if not text or "\n" in text or not speaker or ":" in speaker:
            raise InvalidText("manual lines need a clean speaker and a single-line text")
        line = ScriptLine(self._next_id, "cue", text, speaker, "manual")
        self.lines.append(line)
        self._next_id += 1
        if speaker not in self.characters:
            self.characters.append(speaker)
        self._translate(line)
        self._log("manual", line_id=line.id, speaker=speaker, text=text)
        return line

    def discard_from(self, line_id: int) -> None:
        """Remove the line and every later one; prompt lines are immutable."""
        if any(l.id == line_id for l in self.prompt.lines):
            raise PromptLineImmutable(f"line {line_id} belongs to the prompt")
        if not any(l.id == line_id for l in self.lines):
            raise UnknownLine(f"no line with id {line_id}")
        removed = [l.id for l in self.lines if l.id >= line_id]
        self.lines = [l for l in self.lines if l.id < line_id]
        for rid in removed:
            self.translations.pop(rid, None)
        self._next_id = line_id
        self.characters = extract_characters(self.full_script())
        self._log("discard", line_id=line_id)

    # -- export ------------------------------------------------------------

    def generated_fraction(self) -> float:
        """Share of session-added text (by characters) that was generated."""
        generated = sum(len(l.text) for l in self.lines if l.origin == "generated")
        manual = sum(len(l.text) for l in self.lines if l.origin == "manual")
        total = generated + manual
        return generated / total if total else 0.0

    def export_plain(self) -> bytes:
        return render_script(self.full_script()).encode("utf-8")

    def state_dict(self) -> dict:
        return {
            "session_id": self.id,
            "prompt": {
                "setting": self.prompt.setting,
                "lines": [asdict(l) for l in self.prompt.lines],
            },
            "lines": [asdict(l) for l in self.lines],
            "translations": {
                str(lid): {
                    "target_cue": t.target_cue,
                    "target_text": t.target_text,
                    "ok": t.ok,
                }
                for lid, t in sorted(self.translations.items())
            },
            "events": self.events,
            "configs": _configs_dict(self.configs),
            "characters": list(self.characters),
            "generated_fraction": self.generated_fraction(),
        }

    def export_structured(self) -> bytes:
        return json.dumps(self.state_dict(), ensure_ascii=False, indent=2).encode("utf-8")

    def export(self, format: str) -> bytes:
        if format == "plain":
            return self.export_plain()
        if format == "structured":
            return self.export_structured()
        raise ValueError(f"unknown export format {format!r}")


def _configs_dict(configs: SessionConfigs) -> dict:
    return {
        "sampler": asdict(configs.sampler),
        "budget": asdict(configs.budget),
        "summarizer": asdict(configs.summarizer),
        "retry": asdict(configs.retry),
    }


def replay_session(
    events: Sequence[dict],
    backend: LmBackend,
    mt: MtClient,
    session_id: str = "replay",
) -> Session:
    """Rebuild a session by re-running its event log.

    Backends must be the deterministic ones the session originally used;
    recorded timestamps are replayed so the event logs match too.
    """
    if not events or events[0]["action"] != "create":
        raise ValueError("event log must start with a create event")
    timestamps = iter([ev["timestamp"] for ev in events])
    clock: Clock = lambda: next(timestamps)
    head = events[0]
    flat = {}
    for group in head.get("configs", {}).values():
        flat.update(group)
    session = Session.create(
        session_id,
        head["prompt"],
        backend,
        mt,
        configs=SessionConfigs.from_overrides(flat),
        clock=clock,
        name_table=head.get("name_table"),
    )
    for ev in events[1:]:
        action = ev["action"]
        if action == "generate":
            line = session.generate_next()
            if line.id != ev["line_id"]:
                raise ValueError(f"replay diverged at line {ev['line_id']}")
        elif action == "generate_failed":
            try:
                session.generate_next()
            except DuplicateExhausted:
                pass
            else:
                raise ValueError("replay diverged: expected duplicate exhaustion")
        elif action == "manual":
            session.insert_manual(ev["speaker"], ev["text"])
        elif action == "discard":
            session.discard_from(ev["line_id"])
        else:
            raise ValueError(f"unknown event action {action!r}")
    return session


class SessionStore:
    """Append-only event log plus snapshot, one directory per session."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _dir(self, session_id: str) -> Path:
        return self.root / session_id

    def save(self, session: Session) -> None:
        directory = self._dir(session.id)
        directory.mkdir(parents=True, exist_ok=True)
        events_path = directory / "events.jsonl"
        events_path.write_text(
            "".join(json.dumps(ev, ensure_ascii=False) + "\n" for ev in session.events),
            encoding="utf-8",
        )
        (directory / "snapshot.json").write_bytes(session.export_structured())

    def load_events(self, session_id: str) -> list[dict]:
        events_path = self._dir(session_id) / "events.jsonl"
        if not events_path.exists():
            raise KeyError(session_id)
        return [
            json.loads(line)
            for line in events_path.read_text("utf-8").splitlines()
            if line.strip()
        ]

    def load(self, session_id: str, backend: LmBackend, mt: MtClient) -> Session:
        return replay_session(self.load_events(session_id), backend, mt, session_id)
