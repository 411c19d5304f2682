/**
 * Scripted end-to-end session against the real task service: builds the
 * thick cross in four composed steps, saves it as a helper, submits with an
 * exact match, then reuses the helper as an operand in the next trial and
 * checks the server-side event log for the helper use.
 */
import { spawn, ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { Composer, OperandRef } from "../src/compose.js";

const THICK_CROSS = [
  "....##....",
  "....##....",
  "....##....",
  "....##....",
  "##########",
  "##########",
  "....##....",
  "....##....",
  "....##....",
  "....##....",
].join("\n") + "\n";

const FRAMED_THICK_CROSS = [
  "##########",
  "#...##...#",
  "#...##...#",
  "#...##...#",
  "##########",
  "##########",
  "#...##...#",
  "#...##...#",
  "#...##...#",
  "##########",
].join("\n") + "\n";

const PORT = 8910 + Math.floor(Math.random() * 500);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let workDir: string;

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      await fetch(`${BASE}/api/sessions/none`);
      return;
    } catch {
      await new Promise((r) => setTimeout(r, 150));
    }
  }
  throw new Error("task service did not come up");
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "pbui-e2e-"));
  const corpusPath = join(workDir, "corpus.txt");
  writeFileSync(corpusPath, `= T1\n${THICK_CROSS}\n= T2\n${FRAMED_THICK_CROSS}\n`);
  server = spawn(
    "python3",
    [
      "-m",
      "patternbuilder.cli",
      "serve",
      "--port",
      String(PORT),
      "--data-dir",
      join(workDir, "sessions"),
      "--corpus",
      corpusPath,
    ],
    { stdio: "ignore" },
  );
  await waitForServer();
}, 30_000);

afterAll(() => {
  server?.kill("SIGTERM");
});

/** One user gesture: pick an operation (or none) and click operands. */
async function composeAndPost(
  api: ApiClient,
  sessionId: string,
  operation: string | null,
  operands: OperandRef[],
): Promise<{ index: number; canvas: string }> {
  const composer = new Composer();
  if (operation !== null) composer.selectOperation(operation);
  let program: string | null = null;
  for (const ref of operands) {
    const outcome = composer.selectOperand(ref);
    expect(outcome.status).not.toBe("blocked");
    if (outcome.status === "ready") program = outcome.program;
  }
  expect(program).not.toBeNull();
  return api.addStep(sessionId, program!);
}

describe("scripted session", () => {
  it("builds the thick cross, saves a helper, and reuses it next trial", async () => {
    const api = new ApiClient(BASE);
    const created = await api.createSession("task");
    const sid = created.session_id;
    expect(created.state.trial).toBe("T1");

    // Four composed steps toward the thick cross.
    await composeAndPost(api, sid, "refl_h", [{ kind: "primitive", name: "line_h" }]);
    await composeAndPost(api, sid, "add", [
      { kind: "primitive", name: "line_h" },
      { kind: "step", index: 1 },
    ]);
    await composeAndPost(api, sid, "refl_d", [{ kind: "step", index: 2 }]);
    const fourth = await composeAndPost(api, sid, "add", [
      { kind: "step", index: 2 },
      { kind: "step", index: 3 },
    ]);
    expect(fourth.index).toBe(4);
    expect(fourth.canvas).toBe(THICK_CROSS);

    const helper = await api.saveHelper(sid, 4);
    expect(helper.name).toBe("h1");

    const submitted = await api.submit(sid);
    expect(submitted.accuracy).toBe(true);
    expect(submitted.points).toBe(1);
    expect(submitted.next_trial).toBe("T2");

    // Next trial: the saved helper as one operand of a single composed step.
    const reuse = await composeAndPost(api, sid, "add", [
      { kind: "helper", name: "h1" },
      { kind: "primitive", name: "square" },
    ]);
    expect(reuse.canvas).toBe(FRAMED_THICK_CROSS);
    const second = await api.submit(sid);
    expect(second.accuracy).toBe(true);
    expect(second.points).toBe(2);

    // The server-side log must show the helper use on that step.
    const log = await api.fetchLog(sid);
    const events = log
      .trim()
      .split("\n")
      .map((line) => JSON.parse(line) as { kind: string; payload: Record<string, unknown> });
    const helperSaves = events.filter((e) => e.kind === "helper_saved");
    expect(helperSaves).toHaveLength(1);
    expect(helperSaves[0].payload.name).toBe("h1");

    const trial2Steps = events
      .slice(events.findIndex((e) => e.kind === "trial_started" && e.payload.trial === "T2"))
      .filter((e) => e.kind === "step_added");
    expect(trial2Steps).toHaveLength(1);
    expect(String(trial2Steps[0].payload.program)).toContain("h1");
  }, 30_000);

  it("server rejects invalid programs and the client surfaces the message", async () => {
    const api = new ApiClient(BASE);
    const { session_id } = await api.createSession("task");
    await expect(api.addStep(session_id, "add(line_h)")).rejects.toThrow(/argument/);
  });

  it("free play gallery flow", async () => {
    const api = new ApiClient(BASE);
    const { session_id } = await api.createSession("freeplay");
    await composeAndPost(api, session_id, "add", [
      { kind: "primitive", name: "square" },
      { kind: "primitive", name: "diag" },
    ]);
    await api.submitGallery(session_id, "Fireflower");
    const state = await api.getSession(session_id);
    expect(state.gallery).toHaveLength(1);
    expect(state.gallery[0].name).toBe("Fireflower");
    expect(state.steps).toHaveLength(0);
  });
});
