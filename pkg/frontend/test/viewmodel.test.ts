import { describe, expect, it } from "vitest";
import { buildViewModel } from "../src/viewmodel";
import { FakeServer } from "./fakeServer";

describe("buildViewModel", () => {
  it("projects prompt and session lines in order with labels", () => {
    const server = new FakeServer();
    server.state.lines.push(server.line(2, "ROBOT", "I think.", "generated"));
    const vm = buildViewModel(server.state);
    expect(vm.rows.map((r) => r.id)).toEqual([0, 1, 2]);
    expect(vm.rows[0].label).toBe("ROBOT: Who am I?");
    expect(vm.setting).toBe("A dark lab.");
  });

  it("marks only non-prompt lines as discardable", () => {
    const server = new FakeServer();
    server.state.lines.push(server.line(2, "ROBOT", "I think.", "generated"));
    server.state.lines.push(server.line(3, "HELENA", "Then act.", "manual"));
    const vm = buildViewModel(server.state);
    expect(vm.rows.map((r) => r.discardable)).toEqual([false, false, true, true]);
  });

  it("pairs lines with translations and flags failed ones", () => {
    const server = new FakeServer();
    server.state.lines.push(server.line(2, "ROBOT", "I think.", "generated"));
    server.state.translations["2"] = { target_cue: "ROBOT", target_text: "I think.", ok: false };
    const vm = buildViewModel(server.state);
    expect(vm.rows[0].translation).toEqual({ text: "ROBOT: Kdo jsem?", flagged: false });
    expect(vm.rows[2].translation?.flagged).toBe(true);
  });

  it("leaves translation null when none exists for a line", () => {
    const server = new FakeServer();
    server.state.lines.push(server.line(2, "ROBOT", "I think.", "generated"));
    delete server.state.translations["2"];
    const vm = buildViewModel(server.state);
    expect(vm.rows[2].translation).toBeNull();
  });

  it("disables generation while the server reports a generation in flight", () => {
    const server = new FakeServer();
    expect(buildViewModel(server.state).generateDisabled).toBe(false);
    server.state.status = "generating";
    expect(buildViewModel(server.state).generateDisabled).toBe(true);
  });

  it("is a pure function of the state", () => {
    const server = new FakeServer();
    server.state.lines.push(server.line(2, "ROBOT", "I think.", "generated"));
    expect(buildViewModel(server.state)).toEqual(buildViewModel(server.state));
  });
});
