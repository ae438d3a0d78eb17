import { ApiClient, ApiRequestError } from "./api";
import { buildViewModel, ViewModel } from "./viewmodel";

export type ControllerEvents = {
  onView: (vm: ViewModel) => void;
  onNotice: (message: string) => void;
  /** Asked before a discard; return true to proceed. */
  confirmDiscard: (lineId: number) => boolean;
};

/**
 * Orchestrates the page: refreshes from GET state, runs at most one
 * mutating request at a time, and polls while a generation is in flight.
 */
export class Controller {
  private client: ApiClient;
  private sessionId: string;
  events: ControllerEvents;
  private mutationInFlight = false;
  private pollTimer: ReturnType<typeof setInterval> | null = null;
  pollIntervalMs = 1000;

  constructor(client: ApiClient, sessionId: string, events: ControllerEvents) {
    this.client = client;
    this.sessionId = sessionId;
    this.events = events;
  }

  get busy(): boolean {
    return this.mutationInFlight;
  }

  async refresh(): Promise<ViewModel> {
    const state = await this.client.getSession(this.sessionId);
    const vm = buildViewModel(state);
    if (this.mutationInFlight) vm.generateDisabled = true;
    this.events.onView(vm);
    if (state.status === "generating") this.startPolling();
    else this.stopPolling();
    return vm;
  }

  private async mutate(action: () => Promise<unknown>): Promise<void> {
    if (this.mutationInFlight) return;
    this.mutationInFlight = true;
    try {
      await action();
    } catch (err) {
      if (err instanceof ApiRequestError) this.events.onNotice(err.message);
      else this.events.onNotice(String(err));
    } finally {
      this.mutationInFlight = false;
    }
    await this.refresh();
  }

  generate(): Promise<void> {
    return this.mutate(() => this.client.generate(this.sessionId));
  }

  discard(lineId: number): Promise<void> {
    if (!this.events.confirmDiscard(lineId)) return Promise.resolve();
    return this.mutate(() => this.client.discard(this.sessionId, lineId));
  }

  insertManual(speaker: string, text: string): Promise<void> {
    return this.mutate(() => this.client.insertManual(this.sessionId, speaker, text));
  }

  exportUrl(format: "plain" | "structured"): string {
    return this.client.exportUrl(this.sessionId, format);
  }

  startPolling(): void {
    if (this.pollTimer !== null) return;
    this.pollTimer = setInterval(() => {
      void this.refresh();
    }, this.pollIntervalMs);
  }

  stopPolling(): void {
    if (this.pollTimer !== null) {
      clearInterval(this.pollTimer);
      this.pollTimer = null;
    }
  }
}
