/** Typed client for the diagnosis service. All classification comes from
 * the server; this file only moves JSON around. */

export interface SessionInfo {
  id: string;
  task: string;
  strategy: string;
}

export type Tier = "green" | "yellow" | "red";

export type StepClass =
  | "correct"
  | "finished"
  | "deviation"
  | "not-equivalent"
  | "unknown";

export interface StepRecord {
  class: StepClass;
  tier: Tier;
  steps_combined?: number;
  rules?: string[];
  matched_state?: string;
  is_variant?: boolean;
  relation?: number;
  feedback_code?: string;
  best_candidate?: string;
  solution?: string;
}

export interface HintRecord {
  rule: string;
  description: string;
  result_state: string;
}

export interface SessionSummary {
  id: string;
  task: string;
  strategy: string;
  accepted_states: string[];
  finished: boolean;
}

export interface ErrorDetail {
  error: string;
  offset?: number;
  expected?: string;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: ErrorDetail,
  ) {
    super(detail.error);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ReasonerClient {
  constructor(
    private readonly base: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.base + path, init);
    const body = await response.json();
    if (!response.ok) {
      const detail: ErrorDetail =
        typeof body.detail === "object" && body.detail !== null
          ? body.detail
          : { error: String(body.detail ?? response.status) };
      throw new ApiError(response.status, detail);
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  createSession(task: string): Promise<SessionInfo> {
    return this.post("/sessions", { task });
  }

  submitStep(sessionId: string, input: string): Promise<StepRecord> {
    return this.post(`/sessions/${sessionId}/steps`, { input });
  }

  hint(sessionId: string): Promise<HintRecord> {
    return this.request(`/sessions/${sessionId}/hint`);
  }

  session(sessionId: string): Promise<SessionSummary> {
    return this.request(`/sessions/${sessionId}`);
  }
}
