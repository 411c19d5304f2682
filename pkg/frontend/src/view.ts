/**
 * Pure projection of the latest server snapshot plus local composer state.
 * Rendering consumes only this structure, so a full page reload (GET state,
 * empty composer) reconstructs the identical view.
 */

import type { SessionState } from "./api.js";
import type { Composer } from "./compose.js";

export interface ViewState {
  loaded: boolean;
  mode: "task" | "freeplay" | null;
  trial: string | null;
  points: number;
  done: boolean;
  target: string | null;
  workspace: string | null; // last step canvas, the "your pattern" grid
  steps: { index: number; program: string; canvas: string }[];
  helpers: { name: string; canvas: string }[];
  gallery: { name: string | null; canvas: string }[];
  composer: { summary: string; operation: string | null; operandCount: number };
  pending: boolean;
  notice: string | null;
}

export function projectView(
  state: SessionState | null,
  composer: Composer,
  pending: boolean,
  notice: string | null = null,
): ViewState {
  return {
    loaded: state !== null,
    mode: state?.mode ?? null,
    trial: state?.trial ?? null,
    points: state?.points ?? 0,
    done: state?.done ?? false,
    target: state?.target ?? null,
    workspace: state && state.steps.length > 0 ? state.steps[state.steps.length - 1].canvas : null,
    steps: state?.steps.map((s) => ({ index: s.index, program: s.program, canvas: s.canvas })) ?? [],
    helpers: state?.helpers.map((h) => ({ name: h.name, canvas: h.canvas })) ?? [],
    gallery: state?.gallery.map((g) => ({ name: g.name, canvas: g.canvas })) ?? [],
    composer: {
      summary: composer.describe(),
      operation: composer.operation?.name ?? null,
      operandCount: composer.operands.length,
    },
    pending,
    notice,
  };
}
