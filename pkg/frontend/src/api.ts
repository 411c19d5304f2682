/**
 * Typed client for the task-service HTTP API.
 *
 * Mutating requests are queued so at most one is in flight at a time; each
 * one waits for the server before the UI sees its result (no optimistic
 * updates anywhere). Reads bypass the queue.
 */

export interface StepInfo {
  index: number;
  program: string;
  canvas: string;
}

export interface HelperInfo {
  name: string;
  canvas: string;
  source_step?: number;
}

export interface GalleryEntry {
  name: string | null;
  canvas: string;
}

export interface SessionState {
  session_id: string;
  mode: "task" | "freeplay";
  trial_index: number;
  trial: string | null;
  target: string | null;
  steps: StepInfo[];
  helpers: HelperInfo[];
  points: number;
  gallery: GalleryEntry[];
  done: boolean;
  created_at: number;
}

export interface SubmitResult {
  accuracy: boolean;
  points: number;
  next_trial?: string;
}

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private queue: Promise<unknown> = Promise.resolve();

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchFn(this.baseUrl + path, init);
    const text = await resp.text();
    if (!resp.ok) {
      let message = text || `HTTP ${resp.status}`;
      try {
        const parsed = JSON.parse(text);
        if (parsed && typeof parsed.error === "string") message = parsed.error;
      } catch {
        /* non-JSON error body; keep raw text */
      }
      throw new ApiError(message, resp.status);
    }
    return (text ? JSON.parse(text) : {}) as T;
  }

  /** Serialize a mutation behind every previously queued mutation. */
  private mutate<T>(method: string, path: string, body?: unknown): Promise<T> {
    const run = this.queue.then(() => this.request<T>(method, path, body));
    this.queue = run.then(
      () => undefined,
      () => undefined, // a failed mutation must not wedge the queue
    );
    return run;
  }

  createSession(mode: "task" | "freeplay"): Promise<{ session_id: string; state: SessionState }> {
    return this.mutate("POST", "/api/sessions", { mode });
  }

  getSession(sessionId: string): Promise<SessionState> {
    return this.request("GET", `/api/sessions/${sessionId}`);
  }

  addStep(sessionId: string, program: string): Promise<{ index: number; canvas: string }> {
    return this.mutate("POST", `/api/sessions/${sessionId}/steps`, { program });
  }

  saveHelper(sessionId: string, step: number, name?: string): Promise<{ name: string }> {
    const body: { step: number; name?: string } = { step };
    if (name !== undefined) body.name = name;
    return this.mutate("POST", `/api/sessions/${sessionId}/helpers`, body);
  }

  removeHelper(sessionId: string, name: string): Promise<Record<string, never>> {
    return this.mutate("DELETE", `/api/sessions/${sessionId}/helpers/${encodeURIComponent(name)}`);
  }

  submit(sessionId: string): Promise<SubmitResult> {
    return this.mutate("POST", `/api/sessions/${sessionId}/submit`);
  }

  submitGallery(sessionId: string, name: string | null): Promise<Record<string, never>> {
    return this.mutate("POST", `/api/sessions/${sessionId}/gallery`, { name });
  }

  fetchLog(sessionId: string): Promise<string> {
    return this.fetchFn(this.baseUrl + `/api/sessions/${sessionId}/log`).then((resp) => {
      if (!resp.ok) throw new ApiError(`HTTP ${resp.status}`, resp.status);
      return resp.text();
    });
  }
}
