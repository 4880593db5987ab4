/** Three linked mini-charts: imbalance, switching count, and p versus r.
 *
 * Clicking a point commits that r everywhere. The values are plotted
 * verbatim from the sweep payload; only pixel placement is computed here.
 */

import type { SweepRow } from "./types.js";

export const CHART_W = 240;
export const CHART_H = 160;
const PAD = 28;

export function xForR(r: number, rs: number[]): number {
  const lo = Math.min(...rs);
  const hi = Math.max(...rs);
  const span = Math.max(hi - lo, 1);
  return PAD + ((r - lo) / span) * (CHART_W - 2 * PAD);
}

export function yForValue(value: number, values: number[]): number {
  const hi = Math.max(...values, 1e-12);
  return CHART_H - PAD - (value / hi) * (CHART_H - 2 * PAD);
}

interface Series {
  title: string;
  key: "max_imbalance_mw" | "switching_count" | "p";
}

const SERIES: Series[] = [
  { title: "max |imbalance| (MW)", key: "max_imbalance_mw" },
  { title: "lines to switch", key: "switching_count" },
  { title: "disruption ratio p", key: "p" },
];

export interface ChartsView {
  update(): void;
}

export function mountCharts(
  container: HTMLElement,
  getState: () => { sweep: SweepRow[]; currentR: number },
  requestR: (r: number) => void,
): ChartsView {
  const ns = "http://www.w3.org/2000/svg";

  function update(): void {
    const { sweep, currentR } = getState();
    container.textContent = "";
    if (sweep.length === 0) {
      const empty = document.createElement("p");
      empty.className = "empty-state";
      empty.textContent = "no sweep data for this case";
      container.appendChild(empty);
      return;
    }
    const rs = sweep.map((row) => row.r);
    for (const series of SERIES) {
      const numbers = sweep
        .map((row) => row[series.key])
        .filter((v): v is number => v !== null);
      const box = document.createElement("figure");
      box.className = "chart";
      const caption = document.createElement("figcaption");
      caption.textContent = series.title;
      box.appendChild(caption);

      const svg = document.createElementNS(ns, "svg");
      svg.setAttribute("width", String(CHART_W));
      svg.setAttribute("height", String(CHART_H));
      svg.setAttribute("data-series", series.key);

      let previous: { x: number; y: number } | null = null;
      for (const row of sweep) {
        const value = row[series.key];
        if (value === null) continue; // undefined p has no point to draw
        const x = xForR(row.r, rs);
        const y = yForValue(value, numbers);
        if (previous !== null) {
          const seg = document.createElementNS(ns, "line");
          seg.setAttribute("x1", String(previous.x));
          seg.setAttribute("y1", String(previous.y));
          seg.setAttribute("x2", String(x));
          seg.setAttribute("y2", String(y));
          seg.setAttribute("class", "chart-line");
          svg.appendChild(seg);
        }
        previous = { x, y };
        const dot = document.createElementNS(ns, "circle");
        dot.setAttribute("cx", String(x));
        dot.setAttribute("cy", String(y));
        dot.setAttribute("r", row.r === currentR ? "6" : "4");
        dot.setAttribute("class", row.r === currentR ? "chart-dot active" : "chart-dot");
        dot.setAttribute("data-r", String(row.r));
        dot.setAttribute("data-value", String(value));
        dot.addEventListener("click", () => requestR(row.r));
        svg.appendChild(dot);
      }
      box.appendChild(svg);
      container.appendChild(box);
    }
  }

  return { update };
}
