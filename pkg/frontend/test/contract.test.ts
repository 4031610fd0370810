/** UI contract: the walkthrough drives tiers yellow, yellow, green,
 * green-finished, and every tier shown is traceable to the recorded
 * service response it came from. No diagnosis happens client-side. */

import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { join } from "node:path";

import { ApiError, ReasonerClient } from "../src/api.js";
import { SessionController, describeError } from "../src/controller.js";

const fixtures = JSON.parse(
  readFileSync(join(__dirname, "fixtures", "walkthrough.json"), "utf-8"),
);

/** fetch stub that replays the recorded walkthrough responses in order */
function recordedFetch() {
  let stepIndex = 0;
  const calls: string[] = [];
  const respond = (status: number, body: unknown): Response =>
    ({
      ok: status >= 200 && status < 300,
      status,
      json: async () => body,
    }) as Response;

  const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push(`${init?.method ?? "GET"} ${url}`);
    if (url.endsWith("/sessions") && init?.method === "POST") {
      const payload = JSON.parse(String(init.body));
      if (payload.task === "x + = 3") {
        return respond(fixtures.parse_error.status, fixtures.parse_error.body);
      }
      return respond(fixtures.create.status, fixtures.create.body);
    }
    if (url.includes("/steps")) {
      const recorded = fixtures.steps[stepIndex];
      stepIndex += 1;
      expect(JSON.parse(String(init?.body)).input).toBe(recorded.input);
      return respond(recorded.status, recorded.body);
    }
    if (url.endsWith("/hint")) {
      return respond(fixtures.hint.status, fixtures.hint.body);
    }
    throw new Error(`unexpected request ${url}`);
  };
  return { fetchFn, calls };
}

describe("walkthrough contract", () => {
  it("produces yellow, yellow, green, green-finished with traceable tiers", async () => {
    const { fetchFn } = recordedFetch();
    const controller = new SessionController(new ReasonerClient("http://test", fetchFn));

    const panel = await controller.startTask("(-x+1)^2 = 9");
    expect(panel.strategy).toBe("sqrt");
    expect(panel.task).toBe("(-x+1)^2 = 9");

    const views = [];
    for (const step of fixtures.steps) {
      views.push(await controller.submitStep(step.input));
    }

    expect(views.map((v) => v.tier)).toEqual(["yellow", "yellow", "green", "green"]);
    expect(views[3].source.class).toBe("finished");
    expect(controller.finished).toBe(true);

    // traceability: every displayed tier is exactly the recorded response's
    views.forEach((view, i) => {
      expect(view.source).toEqual(fixtures.steps[i].body);
      expect(view.tier).toBe(fixtures.steps[i].body.tier);
    });
  });

  it("derives messages from the recorded feedback codes, never locally", async () => {
    const { fetchFn } = recordedFetch();
    const controller = new SessionController(new ReasonerClient("http://test", fetchFn));
    await controller.startTask("(-x+1)^2 = 9");

    const zero = await controller.submitStep(fixtures.steps[0].input);
    expect(zero.source.feedback_code).toBe("unexpected-zero-derivation");
    expect(zero.message).toMatch(/derived to zero/);

    const expanded = await controller.submitStep(fixtures.steps[1].input);
    expect(expanded.source.feedback_code).toBe("unexpected-structure-change");
    expect(expanded.message).toMatch(/structure/);
  });

  it("locks green steps as the new baseline, leaves yellow editable", async () => {
    const { fetchFn } = recordedFetch();
    const controller = new SessionController(new ReasonerClient("http://test", fetchFn));
    await controller.startTask("(-x+1)^2 = 9");
    expect(controller.baseline).toBe("(-x+1)^2 = 9");

    const yellow = await controller.submitStep(fixtures.steps[0].input);
    expect(yellow.locked).toBe(false);
    expect(controller.baseline).toBe("(-x+1)^2 = 9");

    await controller.submitStep(fixtures.steps[1].input);
    const green = await controller.submitStep(fixtures.steps[2].input);
    expect(green.locked).toBe(true);
    expect(controller.baseline).toBe(fixtures.steps[2].input);
  });

  it("shows the multistep badge only when steps were combined", async () => {
    const { fetchFn } = recordedFetch();
    const controller = new SessionController(new ReasonerClient("http://test", fetchFn));
    await controller.startTask("(-x+1)^2 = 9");
    for (const step of fixtures.steps.slice(0, 3)) {
      const view = await controller.submitStep(step.input);
      expect(view.stepsBadge).toBeUndefined(); // all recorded steps are single
    }
  });

  it("surfaces hint cards from the recorded hint response", async () => {
    const { fetchFn } = recordedFetch();
    const controller = new SessionController(new ReasonerClient("http://test", fetchFn));
    await controller.startTask("(-x+1)^2 = 9");
    const hint = await controller.requestHint();
    expect(hint).toEqual(fixtures.hint.body);
    expect(hint.rule).toBe("sqrt-both-sides");
  });

  it("reports parse failures inline with their offset", async () => {
    const { fetchFn } = recordedFetch();
    const controller = new SessionController(new ReasonerClient("http://test", fetchFn));
    try {
      await controller.startTask("x + = 3");
      expect.unreachable("parse error expected");
    } catch (error) {
      expect(error).toBeInstanceOf(ApiError);
      expect(describeError(error)).toMatch(/offset 4/);
    }
  });
});
