// Headless end-to-end run against the real Python service.

import { spawn, ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { driveSession } from "../src/app.js";
import { cellsSum } from "../src/model.js";

const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;
let server: ChildProcess | null = null;

async function waitForServer(timeoutMs = 30000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${BASE}/sessions/nope`);
      if (resp.status === 404) return; // service is answering
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 300));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "uvicorn", "metricelicit.service:app", "--port", String(PORT), "--log-level", "warning"],
    { cwd: "..", stdio: "ignore" },
  );
  await waitForServer();
}, 40000);

afterAll(() => {
  server?.kill();
});

describe("end-to-end session against the live service", () => {
  it("completes a full scripted session and reports agreement", async () => {
    // scripted user: values caught cases far above correct all-clears
    const wTp = 0.875;
    const wTn = 0.125;
    const { result, answered } = await driveSession(
      BASE,
      (query) => wTp * query.a.tp + wTn * query.a.tn > wTp * query.b.tp + wTn * query.b.tn,
      { epsilon: 0.05, n_eval: 15, seed: 3 },
    );
    expect(answered).toBeGreaterThan(15);
    expect(result.agreement).toBe(100);
    expect(result.weights_l1.tp).toBeGreaterThan(result.weights_l1.tn);
  }, 30000);

  it("served cell counts always sum to out_of", async () => {
    const seen: number[] = [];
    await driveSession(
      BASE,
      (query) => {
        seen.push(cellsSum(query.a.cells) - query.a.out_of);
        seen.push(cellsSum(query.b.cells) - query.b.out_of);
        return query.a.tp > query.b.tp;
      },
      { epsilon: 0.2, n_eval: 3, seed: 9 },
    );
    expect(seen.length).toBeGreaterThan(0);
    expect(seen.every((d) => d === 0)).toBe(true);
  }, 30000);
});
