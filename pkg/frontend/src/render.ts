// String-based renderers: pure functions from payloads to HTML, so the
// session logic stays testable without a browser DOM.

import type { ConfusionPayload, FamiliarizationCard, QueryPayload, ResultPayload } from "./api.js";
import { conditionalRates, flowView } from "./model.js";

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function pct(x: number): string {
  return (100 * x).toFixed(1) + "%";
}

export interface RenderOptions {
  showBars: boolean; // the bar chart ships behind a toggle
  showRates: boolean; // percentages conditioned on the true class
  zoomed: boolean;
}

export const defaultOptions: RenderOptions = {
  showBars: false,
  showRates: false,
  zoomed: false,
};

function flowChart(payload: ConfusionPayload, opts: RenderOptions): string {
  const view = flowView(payload);
  const rates = conditionalRates(payload);
  const rateOf = (kind: string): string => {
    if (!opts.showRates) return "";
    const map: Record<string, number> = {
      tp: rates.truePositiveRate,
      fn: rates.falseNegativeRate,
      fp: rates.falsePositiveRate,
      tn: rates.trueNegativeRate,
    };
    return ` <span class="rate">(${pct(map[kind])})</span>`;
  };
  const flowRows = view.flows
    .map(
      (f) => `<div class="flow flow-${f.kind}">
        <span class="flow-from">${f.from === "sick" ? "has condition" : "no condition"}</span>
        <span class="flow-count" data-kind="${f.kind}">${f.count}${rateOf(f.kind)}</span>
        <span class="flow-to">${f.to === "flagged" ? "flagged" : "cleared"}</span>
      </div>`,
    )
    .join("\n");
  return `<div class="flow-chart">
    <div class="totals totals-left">
      <div class="box">has condition<br><strong>${view.left.sick}</strong></div>
      <div class="box">no condition<br><strong>${view.left.healthy}</strong></div>
    </div>
    <div class="flows">${flowRows}</div>
    <div class="totals totals-right">
      <div class="box">flagged<br><strong>${view.right.flagged}</strong></div>
      <div class="box">cleared<br><strong>${view.right.cleared}</strong></div>
    </div>
    <div class="out-of">of ${view.outOf} patients</div>
  </div>`;
}

function barChart(payload: ConfusionPayload): string {
  const c = payload.cells;
  const max = Math.max(c.tp, c.fp, c.fn, c.tn, 1);
  const bar = (label: string, count: number, kind: string) =>
    `<div class="bar-row">
      <span class="bar-label">${label}</span>
      <span class="bar bar-${kind}" style="width:${(100 * count) / max}%"></span>
      <span class="bar-count">${count}</span>
    </div>`;
  return `<div class="bar-chart" data-axis-total="${payload.out_of}">
    ${bar("caught (sick, flagged)", c.tp, "tp")}
    ${bar("missed (sick, cleared)", c.fn, "fn")}
    ${bar("false alarm (healthy, flagged)", c.fp, "fp")}
    ${bar("correct all-clear (healthy, cleared)", c.tn, "tn")}
  </div>`;
}

export function renderClassifierCard(
  side: "A" | "B",
  payload: ConfusionPayload,
  opts: RenderOptions = defaultOptions,
): string {
  const zoom = opts.zoomed ? " zoomed" : "";
  return `<section class="classifier-card${zoom}" data-side="${side}">
    <h3>System ${side}</h3>
    ${flowChart(payload, opts)}
    ${opts.showBars ? barChart(payload) : ""}
    <button class="choose" data-choice="${side}">Prefer system ${side}</button>
  </section>`;
}

// Both classifiers share one layout and no phase information leaks into the
// markup: evaluation queries are indistinguishable from elicitation ones.
export function renderQuery(query: QueryPayload, opts: RenderOptions = defaultOptions): string {
  return `<div class="query" data-answer-index="${query.answer_index}">
    ${renderClassifierCard("A", query.a, opts)}
    ${renderClassifierCard("B", query.b, opts)}
  </div>
  <div class="controls">
    <label><input type="checkbox" id="toggle-bars"${opts.showBars ? " checked" : ""}> bar chart</label>
    <label><input type="checkbox" id="toggle-rates"${opts.showRates ? " checked" : ""}> per-class rates</label>
    <label><input type="checkbox" id="toggle-zoom"${opts.zoomed ? " checked" : ""}> zoom</label>
  </div>`;
}

export function renderFamiliarization(cards: FamiliarizationCard[]): string {
  const body = cards
    .map((c) => `<article class="fam-card"><h4>${esc(c.title)}</h4><p>${esc(c.body)}</p></article>`)
    .join("\n");
  return `<div class="familiarization">${body}<button id="start">Start</button></div>`;
}

export function renderResult(result: ResultPayload): string {
  const w = result.weights_l1;
  const agreement =
    result.agreement === null
      ? "no evaluation queries were run"
      : `agreed with you on ${result.agreement}% of ${result.n_eval} check questions`;
  return `<div class="result-card">
    <h3>Your elicited trade-off</h3>
    <p class="metric-line">${w.tn.toFixed(3)} &times; correct all-clears + ${w.tp.toFixed(3)} &times; caught cases</p>
    <p class="agreement">${agreement}</p>
  </div>`;
}

export function renderRetry(message: string): string {
  return `<div class="retry">
    <p>We could not reach the server (${esc(message)}). Your answer is saved.</p>
    <button id="retry">Try again</button>
  </div>`;
}
