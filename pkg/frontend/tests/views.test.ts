import { describe, expect, it } from "vitest";

import { layoutTree, rForCutY, yForCut } from "../src/dendrogram.js";
import { CHART_H, mountCharts, xForR, yForValue } from "../src/charts.js";
import { layoutForce } from "../src/graphview.js";
import { fixtureJson } from "./helpers.js";
import type { DendrogramDoc, ZoneGraphDoc } from "../src/types.js";

const HEIGHT = 420;

describe("dendrogram cut geometry", () => {
  it("yForCut and rForCutY are inverse over every level", () => {
    for (const n of [2, 3, 10, 22]) {
      for (let r = 1; r <= n; r++) {
        expect(rForCutY(yForCut(r, n, HEIGHT), n, HEIGHT)).toBe(r);
      }
    }
  });

  it("clamps off-canvas drags into [1, N]", () => {
    // above the root everything is merged; below the leaves nothing is
    expect(rForCutY(-999, 22, HEIGHT)).toBe(1);
    expect(rForCutY(9999, 22, HEIGHT)).toBe(22);
  });

  it("lays out the captured dendrogram without crossings at the leaves", () => {
    const doc = fixtureJson<DendrogramDoc>("dendrogram.json");
    const layout = layoutTree(doc, HEIGHT);
    const slots = [...layout.leafX.values()].sort((a, b) => a - b);
    expect(slots).toEqual([...Array(doc.leaves.length).keys()]);
    // merge heights rise monotonically with merge order
    const ys = doc.merges.map((m) => layout.nodeY.get(m.new_cluster_id)!);
    for (let i = 1; i < ys.length; i++) {
      expect(ys[i]).toBeLessThan(ys[i - 1]);
    }
  });
});

describe("chart scaling", () => {
  it("maps the r domain onto the x axis monotonically", () => {
    const rs = [2, 3, 4, 5];
    const xs = rs.map((r) => xForR(r, rs));
    for (let i = 1; i < xs.length; i++) expect(xs[i]).toBeGreaterThan(xs[i - 1]);
  });

  it("keeps values inside the canvas", () => {
    const values = [0, 3, 10];
    for (const v of values) {
      const y = yForValue(v, values);
      expect(y).toBeGreaterThan(0);
      expect(y).toBeLessThan(CHART_H);
    }
  });
});

describe("empty sweep", () => {
  it("shows the empty-state message instead of charts", () => {
    const box = document.createElement("div");
    const view = mountCharts(box, () => ({ sweep: [], currentR: 1 }), () => {});
    view.update();
    expect(box.querySelector(".empty-state")!.textContent).toContain("no sweep data");
    expect(box.querySelectorAll("svg")).toHaveLength(0);
  });
});

describe("force layout", () => {
  it("is deterministic and keeps nodes inside the frame", () => {
    const doc = fixtureJson<ZoneGraphDoc>("graph.json");
    const a = layoutForce(doc, 440, 420);
    const b = layoutForce(doc, 440, 420);
    expect(a).toEqual(b);
    for (const p of a.values()) {
      expect(p.x).toBeGreaterThanOrEqual(16);
      expect(p.x).toBeLessThanOrEqual(440 - 16);
      expect(p.y).toBeGreaterThanOrEqual(16);
      expect(p.y).toBeLessThanOrEqual(420 - 16);
    }
  });

  it("separates vertices (no two coincide)", () => {
    const doc = fixtureJson<ZoneGraphDoc>("graph.json");
    const pos = [...layoutForce(doc, 440, 420).values()];
    for (let i = 0; i < pos.length; i++) {
      for (let j = i + 1; j < pos.length; j++) {
        const d = Math.hypot(pos[i].x - pos[j].x, pos[i].y - pos[j].y);
        expect(d).toBeGreaterThan(1.0);
      }
    }
  });
});
