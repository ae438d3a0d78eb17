import { describe, expect, it } from "vitest";
import { ApiClient, ApiRequestError } from "../src/api";
import { FakeServer } from "./fakeServer";

describe("ApiClient", () => {
  it("fetches session state", async () => {
    const server = new FakeServer();
    const client = new ApiClient("", server.fetch);
    const state = await client.getSession("s000000");
    expect(state.session_id).toBe("s000000");
    expect(state.prompt.lines).toHaveLength(2);
    expect(server.requests).toEqual(["GET /sessions/s000000"]);
  });

  it("posts generate and returns the new line", async () => {
    const server = new FakeServer();
    const client = new ApiClient("", server.fetch);
    const { line } = await client.generate("s000000");
    expect(line.origin).toBe("generated");
    expect(server.state.lines).toHaveLength(1);
  });

  it("sends speaker and text when inserting a manual line", async () => {
    const server = new FakeServer();
    const client = new ApiClient("", server.fetch);
    const { line } = await client.insertManual("s000000", "ALQUIST", "Enough.");
    expect(line.speaker).toBe("ALQUIST");
    expect(line.origin).toBe("manual");
    expect(server.state.characters).toContain("ALQUIST");
  });

  it("turns error payloads into ApiRequestError with status and code", async () => {
    const server = new FakeServer();
    const client = new ApiClient("", server.fetch);
    const err = await client.discard("s000000", 0).catch((e) => e);
    expect(err).toBeInstanceOf(ApiRequestError);
    expect(err.status).toBe(400);
    expect(err.code).toBe("PromptLineImmutable");
    expect(err.message).toBe("prompt line");
  });

  it("reports unknown lines as 404", async () => {
    const server = new FakeServer();
    const client = new ApiClient("", server.fetch);
    const err = await client.discard("s000000", 99).catch((e) => e);
    expect(err).toBeInstanceOf(ApiRequestError);
    expect(err.status).toBe(404);
  });

  it("builds export URLs with the requested format", () => {
    const client = new ApiClient("http://host:8000/");
    expect(client.exportUrl("s1", "plain")).toBe(
      "http://host:8000/sessions/s1/export?format=plain",
    );
    expect(client.exportUrl("s1", "structured")).toBe(
      "http://host:8000/sessions/s1/export?format=structured",
    );
  });
});
