import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

interface Recorded {
  input: string;
  init?: RequestInit;
  resolve: (resp: Response) => void;
}

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

/** fetch stub whose responses are released manually, to observe ordering. */
function deferredFetch() {
  const calls: Recorded[] = [];
  const fetchFn = (input: string, init?: RequestInit) =>
    new Promise<Response>((resolve) => {
      calls.push({ input, init, resolve });
    });
  return { calls, fetchFn };
}

describe("ApiClient", () => {
  it("serializes mutations: the second POST is not sent until the first resolves", async () => {
    const { calls, fetchFn } = deferredFetch();
    const api = new ApiClient("", fetchFn);
    const first = api.addStep("s", "line_h");
    const second = api.addStep("s", "line_v");
    await Promise.resolve();
    expect(calls).toHaveLength(1);

    calls[0].resolve(jsonResponse({ index: 1, canvas: "" }));
    await first;
    await new Promise((r) => setTimeout(r, 0));
    expect(calls).toHaveLength(2);
    expect(JSON.parse(String(calls[1].init?.body))).toEqual({ program: "line_v" });
    calls[1].resolve(jsonResponse({ index: 2, canvas: "" }));
    await second;
  });

  it("keeps queueing after a failed mutation", async () => {
    const { calls, fetchFn } = deferredFetch();
    const api = new ApiClient("", fetchFn);
    const first = api.addStep("s", "add(line_h)");
    await Promise.resolve();
    calls[0].resolve(jsonResponse({ error: "arity" }, 400));
    await expect(first).rejects.toThrow(ApiError);

    const second = api.submit("s");
    await new Promise((r) => setTimeout(r, 0));
    expect(calls).toHaveLength(2);
    calls[1].resolve(jsonResponse({ accuracy: true, points: 1 }));
    await expect(second).resolves.toEqual({ accuracy: true, points: 1 });
  });

  it("reads do not wait behind queued mutations", async () => {
    const { calls, fetchFn } = deferredFetch();
    const api = new ApiClient("", fetchFn);
    void api.addStep("s", "line_h");
    const read = api.getSession("s");
    await new Promise((r) => setTimeout(r, 0));
    // Both requests are in flight even though neither has resolved: the GET
    // did not queue behind the pending POST.
    const methods = calls.map((c) => c.init?.method);
    expect(methods).toHaveLength(2);
    expect(methods).toContain("GET");
    expect(methods).toContain("POST");
    calls[methods.indexOf("GET")].resolve(jsonResponse({ session_id: "s", steps: [] }));
    await read;
  });

  it("surfaces server error messages", async () => {
    const api = new ApiClient("", async () => jsonResponse({ error: "unknown helper: 'h9'" }, 400));
    await expect(api.addStep("s", "h9")).rejects.toThrow("unknown helper: 'h9'");
  });

  it("builds request paths and bodies", async () => {
    const seen: string[] = [];
    const api = new ApiClient("http://x", async (input, init) => {
      seen.push(`${init?.method ?? "GET"} ${input}`);
      return jsonResponse({});
    });
    await api.createSession("task");
    await api.saveHelper("abc", 2, "mine");
    await api.removeHelper("abc", "mine");
    await api.submitGallery("abc", null);
    expect(seen).toEqual([
      "POST http://x/api/sessions",
      "POST http://x/api/sessions/abc/helpers",
      "DELETE http://x/api/sessions/abc/helpers/mine",
      "POST http://x/api/sessions/abc/gallery",
    ]);
  });
});
