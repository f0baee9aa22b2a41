// Pure view-model helpers for the confusion visualizations.

import type { Cells, ConfusionPayload } from "./api.js";

// Largest-remainder rounding of the four cell probabilities to integer
// counts that sum exactly to outOf. Mirrors the server's display counts so
// the client can render offline or double-check payloads.
export function largestRemainderCells(
  probs: { tp: number; fp: number; fn: number; tn: number },
  outOf: number,
): Cells {
  const order: (keyof Cells)[] = ["tp", "fp", "fn", "tn"];
  const raw = order.map((k) => probs[k] * outOf);
  const base = raw.map(Math.floor);
  let short = outOf - base.reduce((s, v) => s + v, 0);
  const byRemainder = order
    .map((k, i) => ({ i, frac: raw[i] - base[i] }))
    .sort((a, b) => b.frac - a.frac || a.i - b.i);
  for (const { i } of byRemainder) {
    if (short <= 0) break;
    base[i] += 1;
    short -= 1;
  }
  return { tp: base[0], fp: base[1], fn: base[2], tn: base[3] };
}

export function cellsSum(cells: Cells): number {
  return cells.tp + cells.fp + cells.fn + cells.tn;
}

export interface FlowView {
  outOf: number;
  // label totals on the left (ground truth), prediction totals on the right
  left: { sick: number; healthy: number };
  right: { flagged: number; cleared: number };
  flows: { from: "sick" | "healthy"; to: "flagged" | "cleared"; count: number; kind: keyof Cells }[];
}

// Flow-chart layout: ground-truth totals in the left column, prediction
// totals in the right column, with the four flows between them.
export function flowView(payload: ConfusionPayload): FlowView {
  const c = payload.cells;
  return {
    outOf: payload.out_of,
    left: { sick: c.tp + c.fn, healthy: c.fp + c.tn },
    right: { flagged: c.tp + c.fp, cleared: c.fn + c.tn },
    flows: [
      { from: "sick", to: "flagged", count: c.tp, kind: "tp" },
      { from: "sick", to: "cleared", count: c.fn, kind: "fn" },
      { from: "healthy", to: "flagged", count: c.fp, kind: "fp" },
      { from: "healthy", to: "cleared", count: c.tn, kind: "tn" },
    ],
  };
}

export interface RateView {
  truePositiveRate: number;
  falseNegativeRate: number;
  falsePositiveRate: number;
  trueNegativeRate: number;
}

// Percentages conditioned on the true class (the optional toggle view).
export function conditionalRates(payload: ConfusionPayload): RateView {
  const c = payload.cells;
  const sick = Math.max(c.tp + c.fn, 1);
  const healthy = Math.max(c.fp + c.tn, 1);
  return {
    truePositiveRate: c.tp / sick,
    falseNegativeRate: c.fn / sick,
    falsePositiveRate: c.fp / healthy,
    trueNegativeRate: c.tn / healthy,
  };
}

export function validatePayload(payload: ConfusionPayload): string | null {
  if (cellsSum(payload.cells) !== payload.out_of) {
    return `cells sum ${cellsSum(payload.cells)} != out_of ${payload.out_of}`;
  }
  const expected = largestRemainderCells(payload, payload.out_of);
  for (const key of ["tp", "fp", "fn", "tn"] as (keyof Cells)[]) {
    if (Math.abs(expected[key] - payload.cells[key]) > 1) {
      return `cell ${key} deviates from rounded probability`;
    }
  }
  return null;
}
