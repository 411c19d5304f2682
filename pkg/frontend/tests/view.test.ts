import { describe, expect, it } from "vitest";

import type { SessionState } from "../src/api.js";
import { Composer } from "../src/compose.js";
import { projectView } from "../src/view.js";

const SNAPSHOT: SessionState = {
  session_id: "abc",
  mode: "task",
  trial_index: 1,
  trial: "P2",
  target: "#### target ####",
  steps: [
    { index: 1, program: "line_h", canvas: "c1" },
    { index: 2, program: "add(step_1,line_v)", canvas: "c2" },
  ],
  helpers: [{ name: "h1", canvas: "hc", source_step: 1 }],
  points: 1,
  gallery: [],
  done: false,
  created_at: 123.0,
};

describe("projectView", () => {
  it("is a pure projection: same inputs, identical view", () => {
    const a = projectView(SNAPSHOT, new Composer(), false);
    const b = projectView(SNAPSHOT, new Composer(), false);
    expect(a).toEqual(b);
  });

  it("reload invariant: a fresh composer over the fetched snapshot rebuilds the view", () => {
    const composer = new Composer();
    composer.selectOperation("add");
    const before = projectView(SNAPSHOT, composer, false);
    expect(before.composer.operation).toBe("add");
    // After a reload the composer is empty but everything server-derived matches.
    const reloaded = projectView(SNAPSHOT, new Composer(), false);
    const { composer: _a, ...serverSideBefore } = before;
    const { composer: _b, ...serverSideAfter } = reloaded;
    expect(serverSideAfter).toEqual(serverSideBefore);
  });

  it("uses the last step as the workspace canvas", () => {
    const view = projectView(SNAPSHOT, new Composer(), false);
    expect(view.workspace).toBe("c2");
    expect(view.steps).toHaveLength(2);
    expect(view.helpers).toEqual([{ name: "h1", canvas: "hc" }]);
  });

  it("projects the unloaded state", () => {
    const view = projectView(null, new Composer(), true, "hello");
    expect(view.loaded).toBe(false);
    expect(view.workspace).toBeNull();
    expect(view.pending).toBe(true);
    expect(view.notice).toBe("hello");
  });
});
