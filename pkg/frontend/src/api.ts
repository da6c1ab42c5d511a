/** Typed client for the service API.
 *
 * Requests that mutate one session are chained through a per-session lock so
 * a click can never overtake the previous request; the server result is the
 * single source of truth and callers re-render from it.
 */

import type {
  AnnotateResult,
  AnnotationImport,
  EpisodeState,
  LevelsInfo,
  NextPair,
  Relation,
  SessionState,
  StepResult,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  private locks = new Map<string, Promise<unknown>>();

  constructor(private baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    const data: unknown = text ? JSON.parse(text) : null;
    if (!response.ok) {
      const err = data as { error?: string; message?: string } | null;
      throw new ApiError(
        response.status,
        err?.error ?? "HttpError",
        err?.message ?? `request failed with ${response.status}`,
      );
    }
    return data as T;
  }

  /** Serialize tasks sharing a key; independent keys run freely. */
  private locked<T>(key: string, task: () => Promise<T>): Promise<T> {
    const previous = this.locks.get(key) ?? Promise.resolve();
    const next = previous.then(task, task);
    this.locks.set(
      key,
      next.then(
        () => undefined,
        () => undefined,
      ),
    );
    return next;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/api/health");
  }

  levels(): Promise<LevelsInfo> {
    return this.request("GET", "/api/levels");
  }

  newGame(level: number): Promise<EpisodeState> {
    return this.request("POST", "/api/games", { level });
  }

  gameState(episodeId: string): Promise<EpisodeState> {
    return this.request("GET", `/api/games/${episodeId}`);
  }

  step(
    episodeId: string,
    source: string,
    target: string,
    relation: Relation,
  ): Promise<StepResult> {
    return this.locked(episodeId, () =>
      this.request("POST", `/api/games/${episodeId}/step`, {
        source,
        target,
        relation,
      }),
    );
  }

  newAnnotation(payload: AnnotationImport | string): Promise<SessionState> {
    return this.request("POST", "/api/annotations", payload);
  }

  addEntity(sessionId: string, start: number, end: number): Promise<SessionState> {
    return this.locked(sessionId, () =>
      this.request("POST", `/api/annotations/${sessionId}/entities`, { start, end }),
    );
  }

  removeEntity(sessionId: string, entityId: string): Promise<SessionState> {
    return this.locked(sessionId, () =>
      this.request("DELETE", `/api/annotations/${sessionId}/entities/${entityId}`),
    );
  }

  setEntityKind(
    sessionId: string,
    entityId: string,
    kind: string,
  ): Promise<SessionState> {
    return this.locked(sessionId, () =>
      this.request("PATCH", `/api/annotations/${sessionId}/entities/${entityId}`, {
        kind,
      }),
    );
  }

  annotate(
    sessionId: string,
    source: string,
    target: string,
    relation: Relation,
  ): Promise<AnnotateResult> {
    return this.locked(sessionId, () =>
      this.request("POST", `/api/annotations/${sessionId}/relations`, {
        source,
        target,
        relation,
      }),
    );
  }

  detectEntities(sessionId: string): Promise<SessionState> {
    return this.locked(sessionId, () =>
      this.request("POST", `/api/annotations/${sessionId}/detect-entities`),
    );
  }

  nextPair(sessionId: string, mode: "random" | "guided"): Promise<NextPair> {
    return this.locked(sessionId, () =>
      this.request("GET", `/api/annotations/${sessionId}/next-pair?mode=${mode}`),
    );
  }

  /** Export body as raw bytes so a download matches the wire format exactly. */
  async exportRaw(sessionId: string): Promise<string> {
    const response = await fetch(
      `${this.baseUrl}/api/annotations/${sessionId}/export`,
    );
    if (!response.ok) {
      throw new ApiError(response.status, "HttpError", "export failed");
    }
    return response.text();
  }
}
