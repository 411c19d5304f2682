// @vitest-environment jsdom
import { beforeEach, describe, expect, it } from "vitest";

import { App } from "../src/app.js";
import type { SessionState } from "../src/api.js";

const CROSS = [
  "....#.....",
  "....#.....",
  "....#.....",
  "....#.....",
  "##########",
  "....#.....",
  "....#.....",
  "....#.....",
  "....#.....",
  "....#.....",
].join("\n") + "\n";

const EMPTY = Array(10).fill(".".repeat(10)).join("\n") + "\n";

/** Minimal in-memory stand-in for the task service, behind fetch. */
function fakeService() {
  const state: SessionState = {
    session_id: "fake",
    mode: "task",
    trial_index: 0,
    trial: "P1",
    target: CROSS,
    steps: [],
    helpers: [],
    points: 0,
    gallery: [],
    done: false,
    created_at: 1.0,
  };
  const requests: { method: string; path: string; body?: unknown }[] = [];

  const fetchFn = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = String(input);
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    requests.push({ method, path, body });

    const json = (value: unknown, status = 200) =>
      new Response(JSON.stringify(value), { status, headers: { "content-type": "application/json" } });

    if (method === "POST" && path === "/api/sessions") {
      return json({ session_id: state.session_id, state });
    }
    if (method === "GET" && path === `/api/sessions/${state.session_id}`) {
      return json(state);
    }
    if (method === "POST" && path === `/api/sessions/${state.session_id}/steps`) {
      const program = (body as { program: string }).program;
      if (program.includes("bogus")) return json({ error: "unknown identifier: 'bogus'" }, 400);
      // The fake always renders the cross; the real server does the math.
      state.steps = [...state.steps, { index: state.steps.length + 1, program, canvas: CROSS }];
      return json({ index: state.steps.length, canvas: CROSS });
    }
    if (method === "POST" && path === `/api/sessions/${state.session_id}/helpers`) {
      const name = `h${state.helpers.length + 1}`;
      state.helpers = [...state.helpers, { name, canvas: CROSS, source_step: (body as { step: number }).step }];
      return json({ name });
    }
    if (method === "POST" && path === `/api/sessions/${state.session_id}/submit`) {
      const accuracy = state.steps.length > 0 && state.steps[state.steps.length - 1].canvas === state.target;
      if (accuracy) state.points += 1;
      state.steps = [];
      return json({ accuracy, points: state.points, next_trial: "P2" });
    }
    return json({ error: `unhandled ${method} ${path}` }, 404);
  };

  return { state, requests, fetchFn };
}

async function settle(): Promise<void> {
  for (let i = 0; i < 20; i++) await new Promise((r) => setTimeout(r, 0));
}

function clickButton(root: HTMLElement, label: string): void {
  const buttons = Array.from(root.querySelectorAll("button"));
  const target = buttons.find((b) => b.textContent === label);
  if (!target) throw new Error(`no button labeled ${label}`);
  target.click();
}

describe("App", () => {
  let root: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = '<div id="app"></div>';
    root = document.getElementById("app")!;
    sessionStorage.clear();
    history.replaceState(null, "", "/");
  });

  it("creates a session and renders target, palettes, and points", async () => {
    const service = fakeService();
    globalThis.fetch = service.fetchFn as typeof fetch;
    await new App(root).start();
    await settle();
    expect(root.textContent).toContain("Target: P1");
    expect(root.textContent).toContain("Points: 0");
    expect(root.querySelectorAll("canvas").length).toBeGreaterThan(0);
    const labels = Array.from(root.querySelectorAll("button")).map((b) => b.textContent);
    for (const op of ["invert", "add", "overlap", "line_h", "triangle", "Submit"]) {
      expect(labels).toContain(op);
    }
  });

  it("click-to-compose posts the assembled program and re-renders from the server", async () => {
    const service = fakeService();
    globalThis.fetch = service.fetchFn as typeof fetch;
    await new App(root).start();
    await settle();

    clickButton(root, "add");
    await settle();
    clickButton(root, "line_h");
    await settle();
    clickButton(root, "line_v");
    await settle();

    const stepPost = service.requests.find((r) => r.path.endsWith("/steps"));
    expect(stepPost?.body).toEqual({ program: "add(line_h,line_v)" });
    expect(root.querySelectorAll(".steps li").length).toBe(1);
    expect(root.textContent).toContain("add(line_h,line_v)");
  });

  it("saves a helper from a step and submits with accuracy feedback", async () => {
    const service = fakeService();
    globalThis.fetch = service.fetchFn as typeof fetch;
    await new App(root).start();
    await settle();

    clickButton(root, "add");
    clickButton(root, "line_h");
    await settle();
    clickButton(root, "line_v");
    await settle();
    clickButton(root, "+");
    await settle();
    expect(root.textContent).toContain("h1");

    clickButton(root, "Submit");
    await settle();
    expect(root.textContent).toContain("Exact match! +1 point");
    expect(root.textContent).toContain("Points: 1");
    expect(root.querySelectorAll(".steps li").length).toBe(0);
  });

  it("shows server errors inline without adding a step", async () => {
    const service = fakeService();
    globalThis.fetch = service.fetchFn as typeof fetch;
    const app = new App(root);
    await app.start();
    await settle();

    clickButton(root, "advanced");
    const input = root.querySelector(".advanced input") as HTMLInputElement;
    input.value = "bogus";
    clickButton(root, "add step");
    await settle();
    expect(root.textContent).toContain("unknown identifier: 'bogus'");
    expect(root.querySelectorAll(".steps li").length).toBe(0);
  });
});
