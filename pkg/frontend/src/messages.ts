/** UI prose over the service's stable feedback codes. The tier and the
 * code always come from the response; only the wording lives here. */

import type { StepRecord, Tier } from "./api.js";

const FEEDBACK_PROSE: Record<string, string> = {
  "unexpected-zero-derivation":
    "You derived to zero - this strategy keeps the constant on the right.",
  "unexpected-term-count":
    "The number of terms changed unexpectedly - compare with the expected step.",
  "unexpected-structure-change":
    "The structure changed unexpectedly - this strategy keeps the bracketed form.",
};

export function messageFor(record: StepRecord): string {
  switch (record.class) {
    case "correct": {
      const steps = record.steps_combined ?? 1;
      const combined = steps > 1 ? ` (${steps} steps combined)` : "";
      const variant = record.is_variant ? " (recognized as a variant)" : "";
      return `Good step${combined}${variant}.`;
    }
    case "finished":
      return "Solved! That is the complete solution.";
    case "deviation":
      return (
        FEEDBACK_PROSE[record.feedback_code ?? ""] ??
        "Equivalent, but this deviates from the strategy being practiced."
      );
    case "not-equivalent":
      return "This line is not equivalent to the previous one - check the algebra.";
    case "unknown":
      return "Equivalent, but not a step of this strategy.";
  }
}

export function tierSymbol(tier: Tier): string {
  return tier === "green" ? "✓" : tier === "yellow" ? "⚠" : "✗";
}
