/** Payload shapes of the stagegen JSON API. */

export type Origin = "prompt" | "generated" | "manual";

export type Line = {
  id: number;
  kind: "cue" | "stage-direction";
  text: string;
  speaker: string | null;
  origin: Origin;
};

export type Translation = {
  target_cue: string | null;
  target_text: string;
  ok: boolean;
};

export type SessionState = {
  session_id: string;
  status: "idle" | "generating";
  prompt: { setting: string; lines: Line[] };
  lines: Line[];
  translations: Record<string, Translation>;
  characters: string[];
  generated_fraction: number;
};

export type ApiError = {
  detail: string;
  error?: string;
};
