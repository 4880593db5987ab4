import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ServiceError, parseSweepCsv } from "../src/api.js";
import { fixtureText, makeFetchStub } from "./helpers.js";

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("parseSweepCsv", () => {
  it("parses the captured sweep table verbatim", () => {
    const rows = parseSweepCsv(fixtureText("sweep_max9.csv"));
    expect(rows).toHaveLength(8);
    expect(rows[0].r).toBe(2);
    expect(rows.at(-1)!.r).toBe(9);
    for (const row of rows) {
      expect(Number.isFinite(row.max_imbalance_mw)).toBe(true);
      expect(Number.isInteger(row.switching_count)).toBe(true);
    }
    // the backend guarantees p nondecreasing along nested cuts
    const ps = rows.map((row) => row.p!);
    for (let i = 1; i < ps.length; i++) {
      expect(ps[i]).toBeGreaterThanOrEqual(ps[i - 1]);
    }
  });

  it("handles an empty table and undefined p", () => {
    expect(parseSweepCsv("r,max_imbalance_mw,switching_count,p\n")).toEqual([]);
    const rows = parseSweepCsv("r,max_imbalance_mw,switching_count,p\n5,1.0,2,inf\n");
    expect(rows[0].p).toBeNull();
  });
});

describe("ApiClient", () => {
  it("fetches and types the documented endpoints", async () => {
    const stub = makeFetchStub();
    vi.stubGlobal("fetch", stub.fetch);
    const api = new ApiClient("");
    const summary = await api.caseSummary();
    expect(summary.schema).toBe("gridsplit-case-summary/1");
    const plan = await api.plan(3);
    expect(plan.r).toBe(3);
    const sweep = await api.sweep(9);
    expect(sweep).toHaveLength(8);
    expect(stub.log).toContain("/plan?r=3");
  });

  it("maps error bodies to ServiceError", async () => {
    const stub = makeFetchStub();
    vi.stubGlobal("fetch", stub.fetch);
    const api = new ApiClient("");
    const err = await api.plan(77).catch((e) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect(err.status).toBe(422);
    expect(err.kind).toBe("infeasible");
  });

  it("maps network failure to status 0", async () => {
    const stub = makeFetchStub();
    stub.fail("/plan");
    vi.stubGlobal("fetch", stub.fetch);
    const api = new ApiClient("");
    const err = await api.plan(2).catch((e) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect(err.status).toBe(0);
  });
});
