"""Name-preserving line-by-line translation through a pluggable MT client.

Character cues are never sent to the translator: the utterance travels
alone and the target cue comes from a per-session name table, so the cue
survives any translator byte-exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Protocol, Sequence, runtime_checkable

import httpx

from .errors import TranslationUnavailable
from .script import Script, ScriptLine


@runtime_checkable
class MtClient(Protocol):
    def translate(
        self, sentences: Sequence[str], source_lang: str, target_lang: str
    ) -> list[str]: ...


class IdentityMt:
    """Returns the input unchanged; stands in for a real MT system."""

    def translate(self, sentences, source_lang, target_lang):
        return list(sentences)


class ReverseMt:
    """Reverses each sentence; makes untranslated leakage obvious in tests."""

    def translate(self, sentences, source_lang, target_lang):
        return [s[::-1] for s in sentences]


class RemoteMt:
    """Client for an MT service: POST /v1/translate
    {src_lang, tgt_lang, sentences} -> {translations}."""

    def __init__(
        self,
        base_url: str = "",
        timeout: float = 30.0,
        client: httpx.Client | None = None,
    ):
        self._client = client or httpx.Client(base_url=base_url, timeout=timeout)

    def translate(self, sentences, source_lang, target_lang):
        try:
            resp = self._client.post(
                "/v1/translate",
                json={
                    "src_lang": source_lang,
                    "tgt_lang": target_lang,
                    "sentences": list(sentences),
                },
            )
            resp.raise_for_status()
        except httpx.HTTPError as exc:
            raise TranslationUnavailable(str(exc)) from exc
        translations = resp.json()["translations"]
        if len(translations) != len(sentences):
            raise TranslationUnavailable("translation count mismatch")
        return translations


@dataclass(frozen=True)
class TranslatedLine:
    source: ScriptLine
    target_text: str
    target_cue: str | None
    ok: bool = True

    def render(self) -> str:
        if self.target_cue is not None:
            return f"{self.target_cue}: {self.target_text}" if self.target_text else f"{self.target_cue}:"
        return self.target_text


def _target_cue(line: ScriptLine, names: Mapping[str, str]) -> str | None:
    if line.kind != "cue":
        return None
    return names.get(line.speaker, line.speaker)


def _untranslated(line: ScriptLine, names: Mapping[str, str]) -> TranslatedLine:
    return TranslatedLine(line, line.text, _target_cue(line, names), ok=False)


def translate_line(
    line: ScriptLine,
    names: Mapping[str, str],
    mt: MtClient,
    source_lang: str = "en",
    target_lang: str = "cs",
) -> TranslatedLine:
    """Translate one line; the cue never passes through the MT client."""
    translated = mt.translate([line.text], source_lang, target_lang)[0]
    return TranslatedLine(line, translated, _target_cue(line, names))


def translate_script(
    script: Script,
    names: Mapping[str, str],
    mt: MtClient,
    source_lang: str = "en",
    target_lang: str = "cs",
) -> list[TranslatedLine]:
    """Translate every line, order preserved, one batched MT call.

    A failing batch falls back to per-line calls; lines that still fail
    come back flagged untranslated instead of aborting the rest.
    """
    lines = list(script.lines)
    if not lines:
        return []
    try:
        translations = mt.translate([l.text for l in lines], source_lang, target_lang)
        return [
            TranslatedLine(line, translated, _target_cue(line, names))
            for line, translated in zip(lines, translations)
        ]
    except TranslationUnavailable:
        pass
    out: list[TranslatedLine] = []
    for line in lines:
        try:
            out.append(translate_line(line, names, mt, source_lang, target_lang))
        except TranslationUnavailable:
            out.append(_untranslated(line, names))
    return out
