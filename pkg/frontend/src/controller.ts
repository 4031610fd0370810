/** Session view-model: what the DOM layer renders. Every tier and message
 * is derived from a service response kept alongside it, so each mark can
 * be traced back to the record that produced it. */

import { ApiError, ReasonerClient } from "./api.js";
import type { HintRecord, SessionInfo, StepRecord, Tier } from "./api.js";
import { messageFor } from "./messages.js";

export interface StepView {
  input: string;
  tier: Tier;
  message: string;
  stepsBadge?: number;
  locked: boolean;
  /** the untouched service record this view was built from */
  source: StepRecord;
}

export interface TaskPanel {
  task: string;
  strategy: string;
}

export class SessionController {
  private session: SessionInfo | null = null;
  readonly steps: StepView[] = [];
  finished = false;

  constructor(private readonly client: ReasonerClient) {}

  get active(): boolean {
    return this.session !== null;
  }

  get taskPanel(): TaskPanel | null {
    return this.session
      ? { task: this.session.task, strategy: this.session.strategy }
      : null;
  }

  /** The line a fresh step is checked against: last green, else the task. */
  get baseline(): string | null {
    if (!this.session) return null;
    for (let i = this.steps.length - 1; i >= 0; i -= 1) {
      if (this.steps[i].locked) return this.steps[i].input;
    }
    return this.session.task;
  }

  async startTask(taskText: string): Promise<TaskPanel> {
    this.session = await this.client.createSession(taskText);
    this.steps.length = 0;
    this.finished = false;
    return this.taskPanel!;
  }

  async submitStep(text: string): Promise<StepView> {
    if (!this.session) throw new Error("no active session");
    const record = await this.client.submitStep(this.session.id, text);
    const view: StepView = {
      input: text,
      tier: record.tier,
      message: messageFor(record),
      locked: record.tier === "green",
      source: record,
    };
    if ((record.steps_combined ?? 1) > 1) {
      view.stepsBadge = record.steps_combined;
    }
    this.steps.push(view);
    if (record.class === "finished") this.finished = true;
    return view;
  }

  async requestHint(): Promise<HintRecord> {
    if (!this.session) throw new Error("no active session");
    return this.client.hint(this.session.id);
  }
}

export function describeError(error: unknown): string {
  if (error instanceof ApiError) {
    if (error.detail.offset !== undefined) {
      return `syntax error at offset ${error.detail.offset}: expected ${error.detail.expected}`;
    }
    return error.detail.error;
  }
  return String(error);
}
