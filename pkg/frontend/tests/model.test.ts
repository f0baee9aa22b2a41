import { describe, expect, it } from "vitest";

import type { ConfusionPayload } from "../src/api.js";
import {
  cellsSum,
  conditionalRates,
  flowView,
  largestRemainderCells,
  validatePayload,
} from "../src/model.js";
import { renderClassifierCard, renderQuery } from "../src/render.js";

function payloadFor(tp: number, tn: number, zeta: number, outOf = 10000): ConfusionPayload {
  const probs = { tp, tn, fp: 1 - zeta - tn, fn: zeta - tp };
  return {
    tp,
    tn,
    fp: probs.fp,
    fn: probs.fn,
    zeta,
    out_of: outOf,
    cells: largestRemainderCells(probs, outOf),
  };
}

describe("largest remainder rounding", () => {
  it("sums exactly to out_of over random probabilities", () => {
    let seed = 42;
    const rand = () => {
      seed = (seed * 1103515245 + 12345) % 2147483648;
      return seed / 2147483648;
    };
    for (let trial = 0; trial < 500; trial++) {
      const zeta = 0.2 + 0.6 * rand();
      const tp = zeta * rand();
      const tn = (1 - zeta) * rand();
      for (const outOf of [100, 10000]) {
        const cells = largestRemainderCells(
          { tp, tn, fp: 1 - zeta - tn, fn: zeta - tp },
          outOf,
        );
        expect(cellsSum(cells)).toBe(outOf);
        expect(Math.abs(cells.tp - tp * outOf)).toBeLessThan(1);
      }
    }
  });

  it("matches displayed counts to rounded raw values", () => {
    const payload = payloadFor(0.3, 0.4, 0.5);
    expect(validatePayload(payload)).toBeNull();
  });
});

describe("flow view", () => {
  it("totals are consistent on both sides", () => {
    const payload = payloadFor(0.31, 0.38, 0.5);
    const view = flowView(payload);
    expect(view.left.sick + view.left.healthy).toBe(payload.out_of);
    expect(view.right.flagged + view.right.cleared).toBe(payload.out_of);
    const flowSum = view.flows.reduce((s, f) => s + f.count, 0);
    expect(flowSum).toBe(payload.out_of);
  });

  it("vertex pair renders all-positive vs all-negative flows", () => {
    const allPos = flowView(payloadFor(0.5, 0.0, 0.5));
    expect(allPos.right.cleared).toBe(0);
    const allNeg = flowView(payloadFor(0.0, 0.5, 0.5));
    expect(allNeg.right.flagged).toBe(0);
  });

  it("conditional rates normalize per true class", () => {
    const rates = conditionalRates(payloadFor(0.3, 0.4, 0.5));
    expect(rates.truePositiveRate + rates.falseNegativeRate).toBeCloseTo(1, 9);
    expect(rates.falsePositiveRate + rates.trueNegativeRate).toBeCloseTo(1, 9);
  });
});

describe("rendered markup", () => {
  it("shows the displayed counts and totals", () => {
    const payload = payloadFor(0.31, 0.38, 0.5);
    const html = renderClassifierCard("A", payload);
    for (const count of Object.values(payload.cells)) {
      expect(html).toContain(`>${count}<`);
    }
    expect(html).toContain("of 10000 patients");
  });

  it("does not leak any phase information", () => {
    const query = { answer_index: 7, a: payloadFor(0.3, 0.4, 0.5), b: payloadFor(0.2, 0.45, 0.5) };
    const html = renderQuery(query);
    expect(html).not.toMatch(/elicit|evaluate|phase/i);
  });

  it("bar chart is off by default and appears behind the toggle", () => {
    const query = { answer_index: 0, a: payloadFor(0.3, 0.4, 0.5), b: payloadFor(0.2, 0.45, 0.5) };
    expect(renderQuery(query)).not.toContain("bar-chart");
    expect(
      renderQuery(query, { showBars: true, showRates: false, zoomed: false }),
    ).toContain("bar-chart");
  });
});
