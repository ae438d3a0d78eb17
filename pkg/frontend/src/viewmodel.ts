import type { Line, SessionState, Translation } from "./types";

export type LineRow = {
  id: number;
  label: string;
  origin: Line["origin"];
  discardable: boolean;
  translation: { text: string; flagged: boolean } | null;
};

export type ViewModel = {
  sessionId: string;
  setting: string;
  rows: LineRow[];
  characters: string[];
  generateDisabled: boolean;
  generatedFraction: number;
};

function renderLine(line: Line): string {
  return line.kind === "cue" ? `${line.speaker}: ${line.text}` : line.text;
}

function renderTranslation(t: Translation | undefined): LineRow["translation"] {
  if (!t) return null;
  const text = t.target_cue !== null ? `${t.target_cue}: ${t.target_text}` : t.target_text;
  return { text, flagged: !t.ok };
}

/**
 * Pure projection of a session state into what the page shows.  The same
 * state always produces the same view model, so a full refresh rebuilds
 * an identical page.
 */
export function buildViewModel(state: SessionState): ViewModel {
  const rows: LineRow[] = [...state.prompt.lines, ...state.lines].map((line) => ({
    id: line.id,
    label: renderLine(line),
    origin: line.origin,
    discardable: line.origin !== "prompt",
    translation: renderTranslation(state.translations[String(line.id)]),
  }));
  return {
    sessionId: state.session_id,
    setting: state.prompt.setting,
    rows,
    characters: state.characters,
    generateDisabled: state.status === "generating",
    generatedFraction: state.generated_fraction,
  };
}
