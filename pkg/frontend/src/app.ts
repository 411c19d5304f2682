/**
 * DOM wiring: panels for target, workspace, operations, primitives, steps,
 * helpers, and (in free play) the gallery. Every mutation round-trips the
 * server and re-renders from the fresh snapshot.
 */

import { ApiClient, ApiError, SessionState } from "./api.js";
import { Composer, OPERATIONS, PRIMITIVES, OperandRef } from "./compose.js";
import { renderCanvasThumbnail } from "./thumbnail.js";
import { projectView } from "./view.js";

const SESSION_KEY = "patternbuilder.session";

interface AppElements {
  root: HTMLElement;
}

export class App {
  private api: ApiClient;
  private composer = new Composer();
  private state: SessionState | null = null;
  private pending = false;
  private notice: string | null = null;
  private advanced = false;

  constructor(private readonly root: HTMLElement, apiBase = "") {
    this.api = new ApiClient(apiBase);
  }

  async start(): Promise<void> {
    const params = new URLSearchParams(location.search);
    const wanted = params.get("session") ?? sessionStorage.getItem(SESSION_KEY);
    if (wanted) {
      try {
        this.state = await this.api.getSession(wanted);
        sessionStorage.setItem(SESSION_KEY, wanted);
        this.render();
        return;
      } catch {
        sessionStorage.removeItem(SESSION_KEY);
      }
    }
    await this.newSession(params.get("mode") === "freeplay" ? "freeplay" : "task");
  }

  private async newSession(mode: "task" | "freeplay"): Promise<void> {
    const created = await this.api.createSession(mode);
    this.state = created.state;
    sessionStorage.setItem(SESSION_KEY, created.session_id);
    this.composer.reset();
    this.notice = null;
    this.render();
  }

  /** Run one mutation against the server, then re-render from fresh state.
   * The action may return a notice message to show on success. */
  private async mutate(action: () => Promise<string | void | unknown>): Promise<void> {
    if (!this.state) return;
    this.pending = true;
    this.render();
    try {
      const message = await action();
      this.notice = typeof message === "string" ? message : null;
    } catch (err) {
      this.notice = err instanceof ApiError ? err.message : String(err);
    } finally {
      try {
        this.state = await this.api.getSession(this.state.session_id);
      } catch {
        /* keep last snapshot if the refresh itself fails */
      }
      this.pending = false;
      this.render();
    }
  }

  private composeOperand(ref: OperandRef): void {
    const outcome = this.composer.selectOperand(ref);
    if (outcome.status === "ready") {
      const program = outcome.program;
      this.composer.reset();
      void this.mutate(() => this.api.addStep(this.state!.session_id, program));
    } else if (outcome.status === "blocked") {
      this.notice = outcome.reason;
      this.render();
    } else {
      this.render();
    }
  }

  private submit(): void {
    void this.mutate(async () => {
      const result = await this.api.submit(this.state!.session_id);
      return result.accuracy
        ? `Exact match! +1 point${result.next_trial ? `, next: ${result.next_trial}` : ""}`
        : `Not a match.${result.next_trial ? ` Next: ${result.next_trial}` : ""}`;
    });
  }

  private render(): void {
    const view = projectView(this.state, this.composer, this.pending, this.notice);
    const root = this.root;
    root.textContent = "";
    if (!view.loaded) {
      root.append(el("p", {}, "loading…"));
      return;
    }

    const header = el("header", { class: "topbar" });
    header.append(
      el("h1", {}, "Pattern Builder"),
      el("span", { class: "points" }, `Points: ${view.points}`),
      view.trial ? el("span", { class: "trial" }, `Target: ${view.trial}`) : "",
      button("New task session", () => void this.newSession("task")),
      button("Free play", () => void this.newSession("freeplay")),
    );
    root.append(header);

    if (view.notice) root.append(el("div", { class: "notice" }, view.notice));
    if (view.pending) root.append(el("div", { class: "pending" }, "waiting for server…"));
    if (view.done) root.append(el("div", { class: "done" }, "Session complete. Thanks for playing!"));

    const columns = el("div", { class: "columns" });

    // Left: target (task mode).
    const left = el("section", { class: "panel" });
    if (view.target) {
      left.append(el("h2", {}, "Target"), renderCanvasThumbnail(view.target, { cellSize: 22 }));
    } else if (view.mode === "freeplay") {
      left.append(el("h2", {}, "Free play"), el("p", {}, "No target. Build anything."));
    }
    columns.append(left);

    // Middle: workspace + palettes.
    const middle = el("section", { class: "panel" });
    middle.append(el("h2", {}, "Your pattern"));
    middle.append(
      view.workspace
        ? renderCanvasThumbnail(view.workspace, { cellSize: 22 })
        : el("p", { class: "hint" }, "empty canvas"),
    );
    middle.append(el("h3", {}, "Operations"));
    const ops = el("div", { class: "palette" });
    for (const op of OPERATIONS) {
      ops.append(
        button(op.name, () => {
          this.composer.selectOperation(op.name);
          this.notice = null;
          this.render();
        }, view.composer.operation === op.name ? "selected" : ""),
      );
    }
    middle.append(ops);
    middle.append(el("h3", {}, "Primitive shapes"));
    const prims = el("div", { class: "palette" });
    for (const name of PRIMITIVES) {
      prims.append(button(name, () => this.composeOperand({ kind: "primitive", name })));
    }
    middle.append(prims);
    middle.append(el("p", { class: "composer" }, view.composer.summary));

    const advancedToggle = button(
      this.advanced ? "hide advanced" : "advanced",
      () => {
        this.advanced = !this.advanced;
        this.render();
      },
      "linkish",
    );
    middle.append(advancedToggle);
    if (this.advanced) {
      const input = el("input", { type: "text", placeholder: "raw program, e.g. add(line_h,line_v)" }) as HTMLInputElement;
      const send = button("add step", () => {
        const program = input.value.trim();
        if (program) void this.mutate(() => this.api.addStep(this.state!.session_id, program));
      });
      middle.append(el("div", { class: "advanced" }, input, send));
    }

    if (view.mode === "task") {
      middle.append(button("Submit", () => this.submit(), "submit"));
    } else {
      const nameInput = el("input", { type: "text", placeholder: "optional name" }) as HTMLInputElement;
      const send = button("Submit to gallery", () =>
        void this.mutate(() => this.api.submitGallery(this.state!.session_id, nameInput.value.trim() || null)),
      );
      middle.append(el("div", { class: "gallery-submit" }, nameInput, send));
    }
    columns.append(middle);

    // Right: step sequence + helpers (+ gallery).
    const right = el("section", { class: "panel" });
    right.append(el("h2", {}, "Step sequence"));
    const stepsList = el("ol", { class: "steps" });
    for (const step of view.steps) {
      const li = el("li", {});
      const thumb = renderCanvasThumbnail(step.canvas, { cellSize: 6 });
      thumb.addEventListener("click", () => this.composeOperand({ kind: "step", index: step.index }));
      li.append(
        thumb,
        el("code", {}, step.program),
        button("+", () => void this.mutate(() => this.api.saveHelper(this.state!.session_id, step.index)), "save"),
      );
      stepsList.append(li);
    }
    right.append(stepsList);

    right.append(el("h2", {}, "Your helpers"));
    const helpers = el("div", { class: "helpers" });
    for (const helper of view.helpers) {
      const card = el("div", { class: "helper" });
      const thumb = renderCanvasThumbnail(helper.canvas, { cellSize: 6 });
      thumb.addEventListener("click", () => this.composeOperand({ kind: "helper", name: helper.name }));
      card.append(
        thumb,
        el("span", {}, helper.name),
        button("−", () => void this.mutate(() => this.api.removeHelper(this.state!.session_id, helper.name)), "remove"),
      );
      helpers.append(card);
    }
    right.append(helpers);

    if (view.mode === "freeplay" && view.gallery.length > 0) {
      right.append(el("h2", {}, "Gallery"));
      const gallery = el("div", { class: "gallery" });
      for (const entry of view.gallery) {
        const card = el("div", { class: "gallery-card" });
        card.append(renderCanvasThumbnail(entry.canvas, { cellSize: 6 }), el("span", {}, entry.name ?? "(untitled)"));
        gallery.append(card);
      }
      right.append(gallery);
    }
    columns.append(right);
    root.append(columns);
  }
}

function el(tag: string, attrs: Record<string, string> = {}, ...children: (Node | string)[]): HTMLElement {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  node.append(...children);
  return node;
}

function button(label: string, onClick: () => void, cls = ""): HTMLButtonElement {
  const b = document.createElement("button");
  b.textContent = label;
  if (cls) b.className = cls;
  b.addEventListener("click", onClick);
  return b;
}

export function mount(): void {
  const root = document.getElementById("app");
  if (root) {
    const params = new URLSearchParams(location.search);
    void new App(root, params.get("api") ?? "").start();
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  mount();
}
