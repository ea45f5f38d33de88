import { describe, expect, it } from "vitest";

import { SessionClient, type SessionEvent } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), { status });
}

describe("SessionClient", () => {
  it("builds requests against the configured base", async () => {
    const seen: { url: string; init?: RequestInit }[] = [];
    const client = new SessionClient("http://api:1", async (url, init) => {
      seen.push({ url, init });
      return jsonResponse({ api: 1, id: "abc", version: 0,
                            polygon: { degree: 3, points: [] } });
    });
    await client.createSession({ fixture: "trefoil" });
    await client.samples("abc", 64);
    await client.subdivision("abc", 0.5, 3);
    expect(seen.map((s) => s.url)).toEqual([
      "http://api:1/sessions",
      "http://api:1/sessions/abc/samples?count=64",
      "http://api:1/sessions/abc/subdivision?u=0.5&depth=3",
    ]);
    expect(seen[0].init?.method).toBe("POST");
    expect(JSON.parse(String(seen[0].init?.body))).toEqual({ fixture: "trefoil" });
  });

  it("raises ApiError with the server detail on failures", async () => {
    const client = new SessionClient("", async () =>
      jsonResponse({ detail: "unknown session 'x'" }, 404));
    await expect(client.getPolygon("x")).rejects.toMatchObject({
      status: 404,
      message: "unknown session 'x'",
    });
  });

  it("parses event-stream frames and supports unsubscribe", () => {
    const received: SessionEvent[] = [];
    let closed = false;
    const fakeSource = {
      onmessage: null as ((e: { data: string }) => void) | null,
      close: () => { closed = true; },
    };
    const client = new SessionClient("");
    const stop = client.events("abc", (e) => received.push(e),
                               () => fakeSource as unknown as EventSource);
    fakeSource.onmessage?.({ data: JSON.stringify({ type: "polygon-changed", version: 2 }) });
    fakeSource.onmessage?.({ data: "not json" });
    fakeSource.onmessage?.({ data: JSON.stringify({ type: "analysis-complete" }) });
    stop();
    expect(received.map((e) => e.type)).toEqual(["polygon-changed", "analysis-complete"]);
    expect(closed).toBe(true);
  });
});
