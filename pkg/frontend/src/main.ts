/** DOM wiring for the stepwise solver page. */

import { ReasonerClient } from "./api.js";
import { SessionController, describeError } from "./controller.js";
import { previewInput, prettify } from "./preview.js";
import { tierSymbol } from "./messages.js";

const API_BASE =
  new URLSearchParams(window.location.search).get("api") ?? "http://127.0.0.1:8000";

const controller = new SessionController(new ReasonerClient(API_BASE));

const el = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

const taskInput = el<HTMLInputElement>("task-input");
const taskStart = el<HTMLButtonElement>("task-start");
const taskError = el<HTMLElement>("task-error");
const taskPanel = el<HTMLElement>("task-panel");
const taskText = el<HTMLElement>("task-text");
const strategyBadge = el<HTMLElement>("strategy-badge");
const stepsList = el<HTMLElement>("steps");
const stepForm = el<HTMLElement>("step-form");
const stepInput = el<HTMLInputElement>("step-input");
const stepSubmit = el<HTMLButtonElement>("step-submit");
const stepPreview = el<HTMLElement>("step-preview");
const hintButton = el<HTMLButtonElement>("hint-button");
const hintCard = el<HTMLElement>("hint-card");
const finishedBanner = el<HTMLElement>("finished-banner");

function renderPreview(): void {
  const preview = previewInput(stepInput.value);
  stepPreview.textContent = preview.pretty;
  stepPreview.title = preview.problem ?? "";
  stepPreview.className = preview.ok ? "preview ok" : "preview bad";
  stepSubmit.disabled = !preview.ok || controller.finished;
}

function renderSteps(): void {
  stepsList.replaceChildren();
  for (const step of controller.steps) {
    const li = document.createElement("li");
    li.className = `step ${step.tier}`;
    const mark = document.createElement("span");
    mark.className = "mark";
    mark.textContent = tierSymbol(step.tier);
    const text = document.createElement("span");
    text.className = "text";
    text.textContent = prettify(step.input);
    const note = document.createElement("span");
    note.className = "note";
    note.textContent = step.message;
    li.append(mark, text);
    if (step.stepsBadge) {
      const badge = document.createElement("span");
      badge.className = "badge";
      badge.textContent = `${step.stepsBadge} steps`;
      li.append(badge);
    }
    li.append(note);
    stepsList.append(li);
  }
  finishedBanner.hidden = !controller.finished;
  hintButton.disabled = controller.finished || !controller.active;
  stepInput.disabled = controller.finished;
}

taskStart.addEventListener("click", async () => {
  taskError.textContent = "";
  try {
    const panel = await controller.startTask(taskInput.value);
    taskText.textContent = prettify(panel.task);
    strategyBadge.textContent = panel.strategy;
    taskPanel.hidden = false;
    stepForm.hidden = false;
    hintCard.hidden = true;
    renderSteps();
    renderPreview();
    stepInput.focus();
  } catch (error) {
    taskError.textContent = describeError(error);
  }
});

stepSubmit.addEventListener("click", async () => {
  hintCard.hidden = true;
  try {
    const step = await controller.submitStep(stepInput.value);
    if (step.locked) stepInput.value = "";
    renderSteps();
    renderPreview();
  } catch (error) {
    taskError.textContent = describeError(error);
  }
});

hintButton.addEventListener("click", async () => {
  try {
    const hint = await controller.requestHint();
    hintCard.hidden = false;
    hintCard.textContent = `${hint.rule}: ${hint.description} → ${prettify(hint.result_state)}`;
  } catch (error) {
    hintCard.hidden = false;
    hintCard.textContent = describeError(error);
  }
});

stepInput.addEventListener("input", renderPreview);
taskInput.addEventListener("keydown", (event) => {
  if (event.key === "Enter") taskStart.click();
});
stepInput.addEventListener("keydown", (event) => {
  if (event.key === "Enter" && !stepSubmit.disabled) stepSubmit.click();
});
