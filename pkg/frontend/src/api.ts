import type { ApiError, Line, SessionState } from "./types";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiRequestError extends Error {
  status: number;
  code?: string;

  constructor(status: number, detail: string, code?: string) {
    super(detail);
    this.status = status;
    this.code = code;
  }
}

/** Thin typed client over the session endpoints; fetch is injectable for tests. */
export class ApiClient {
  private baseUrl: string;
  private fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn: FetchLike = (...args) => fetch(...args)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { "Content-Type": "application/json" };
    }
    const resp = await this.fetchFn(this.baseUrl + path, init);
    const payload = await resp.json().catch(() => ({}));
    if (!resp.ok) {
      const err = payload as ApiError;
      throw new ApiRequestError(resp.status, err.detail ?? resp.statusText, err.error);
    }
    return payload as T;
  }

  createSession(prompt: string, config?: Record<string, unknown>): Promise<{ id: string }> {
    return this.request("POST", "/sessions", { prompt, config: config ?? null });
  }

  getSession(id: string): Promise<SessionState> {
    return this.request("GET", `/sessions/${id}`);
  }

  generate(id: string): Promise<{ line: Line }> {
    return this.request("POST", `/sessions/${id}/generate`);
  }

  insertManual(id: string, speaker: string, text: string): Promise<{ line: Line }> {
    return this.request("POST", `/sessions/${id}/lines`, { speaker, text });
  }

  discard(id: string, lineId: number): Promise<{ ok: boolean }> {
    return this.request("POST", `/sessions/${id}/lines/${lineId}/discard`);
  }

  exportUrl(id: string, format: "plain" | "structured"): string {
    return `${this.baseUrl}/sessions/${id}/export?format=${format}`;
  }
}
