// DOM glue around the pure renderers.

import { DriverState, SessionDriver } from "./app.js";
import {
  renderFamiliarization,
  renderQuery,
  renderResult,
  renderRetry,
} from "./render.js";

export const defaultDocumentTitle = "Which system would you trust?";

export function renderFamiliarizationInto(root: HTMLElement): void {
  root.innerHTML = "<p>Loading session…</p>";
}

export function renderStateInto(
  root: HTMLElement,
  driver: SessionDriver,
  state: DriverState,
): void {
  switch (state.kind) {
    case "familiarize": {
      root.innerHTML = renderFamiliarization(state.cards);
      root.querySelector("#start")?.addEventListener("click", () => driver.beginQueries());
      break;
    }
    case "query": {
      root.innerHTML = renderQuery(state.query, driver.options);
      for (const button of root.querySelectorAll("button.choose")) {
        button.addEventListener("click", () => {
          const choice = (button as HTMLButtonElement).dataset.choice as "A" | "B";
          void driver.choose(choice);
        });
      }
      bindToggle(root, driver, "#toggle-bars", "showBars", state);
      bindToggle(root, driver, "#toggle-rates", "showRates", state);
      bindToggle(root, driver, "#toggle-zoom", "zoomed", state);
      break;
    }
    case "submitting": {
      for (const button of root.querySelectorAll("button.choose")) {
        (button as HTMLButtonElement).disabled = true;
      }
      break;
    }
    case "retry": {
      root.innerHTML = renderRetry(state.message);
      root.querySelector("#retry")?.addEventListener("click", () => void driver.retry());
      break;
    }
    case "done": {
      root.innerHTML = renderResult(state.result);
      break;
    }
    case "error": {
      root.innerHTML = `<p class="error">${state.message}</p>`;
      break;
    }
  }
}

function bindToggle(
  root: HTMLElement,
  driver: SessionDriver,
  selector: string,
  key: "showBars" | "showRates" | "zoomed",
  state: DriverState & { kind: "query" },
): void {
  root.querySelector(selector)?.addEventListener("change", (event) => {
    driver.options[key] = (event.target as HTMLInputElement).checked;
    renderStateInto(root, driver, state);
  });
}
