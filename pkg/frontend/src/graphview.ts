/** Force-directed drawing of the zone graph, colored by island membership.
 *
 * Deterministic: vertices start on a golden-angle circle and relax through
 * a fixed number of spring/repulsion iterations, so the same graph always
 * lands in the same picture (zones are anonymous, geography is not drawn).
 */

import type { PlanDoc, ZoneGraphDoc } from "./types.js";
import { colorFor } from "./palette.js";

export interface Point {
  x: number;
  y: number;
}

export function layoutForce(
  doc: ZoneGraphDoc,
  width: number,
  height: number,
  iterations = 200,
): Map<string, Point> {
  const n = doc.vertices.length;
  const cx = width / 2;
  const cy = height / 2;
  const radius = Math.min(width, height) * 0.36;
  const pos = new Map<string, Point>();
  doc.vertices.forEach((v, i) => {
    const angle = i * 2.399963229728653; // golden angle keeps starts spread
    pos.set(v, {
      x: cx + radius * Math.cos(angle) * (0.4 + (0.6 * (i + 1)) / n),
      y: cy + radius * Math.sin(angle) * (0.4 + (0.6 * (i + 1)) / n),
    });
  });
  const wMax = Math.max(...doc.edges.map((e) => e.weight), 1e-9);
  const ideal = radius * 0.55;
  for (let it = 0; it < iterations; it++) {
    const step = 0.08 * (1 - it / iterations) + 0.01;
    const force = new Map<string, Point>(
      doc.vertices.map((v) => [v, { x: 0, y: 0 }]),
    );
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        const a = doc.vertices[i];
        const b = doc.vertices[j];
        const pa = pos.get(a)!;
        const pb = pos.get(b)!;
        const dx = pb.x - pa.x;
        const dy = pb.y - pa.y;
        const dist = Math.max(Math.hypot(dx, dy), 1e-6);
        const repulse = (ideal * ideal) / dist / 8;
        force.get(a)!.x -= (dx / dist) * repulse;
        force.get(a)!.y -= (dy / dist) * repulse;
        force.get(b)!.x += (dx / dist) * repulse;
        force.get(b)!.y += (dy / dist) * repulse;
      }
    }
    for (const e of doc.edges) {
      const pa = pos.get(e.a)!;
      const pb = pos.get(e.b)!;
      const dx = pb.x - pa.x;
      const dy = pb.y - pa.y;
      const dist = Math.max(Math.hypot(dx, dy), 1e-6);
      const pull = ((dist - ideal * (0.5 + 0.5 * (1 - e.weight / wMax))) / ideal) *
        (0.5 + e.weight / wMax);
      force.get(e.a)!.x += (dx / dist) * pull * ideal * 0.1;
      force.get(e.a)!.y += (dy / dist) * pull * ideal * 0.1;
      force.get(e.b)!.x -= (dx / dist) * pull * ideal * 0.1;
      force.get(e.b)!.y -= (dy / dist) * pull * ideal * 0.1;
    }
    for (const v of doc.vertices) {
      const p = pos.get(v)!;
      const f = force.get(v)!;
      p.x += f.x * step * 10;
      p.y += f.y * step * 10;
      p.x += (cx - p.x) * 0.01;
      p.y += (cy - p.y) * 0.01;
      p.x = Math.max(16, Math.min(width - 16, p.x));
      p.y = Math.max(16, Math.min(height - 16, p.y));
    }
  }
  return pos;
}

export interface GraphView {
  update(): void;
}

export function mountGraph(
  container: HTMLElement,
  getState: () => { graph: ZoneGraphDoc | null; plan: PlanDoc | null },
  width = 440,
  height = 420,
): GraphView {
  const ns = "http://www.w3.org/2000/svg";
  const svg = document.createElementNS(ns, "svg");
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  svg.setAttribute("class", "graph-view");
  container.appendChild(svg);
  let cached: { doc: ZoneGraphDoc; pos: Map<string, Point> } | null = null;

  function update(): void {
    const { graph: doc, plan } = getState();
    svg.textContent = "";
    if (doc === null) return;
    if (cached === null || cached.doc !== doc) {
      cached = { doc, pos: layoutForce(doc, width, height) };
    }
    const pos = cached.pos;
    const wMax = Math.max(...doc.edges.map((e) => e.weight), 1e-9);
    for (const e of doc.edges) {
      const pa = pos.get(e.a)!;
      const pb = pos.get(e.b)!;
      const cut =
        plan !== null && plan.assignment[e.a] !== plan.assignment[e.b];
      const line = document.createElementNS(ns, "line");
      line.setAttribute("x1", String(pa.x));
      line.setAttribute("y1", String(pa.y));
      line.setAttribute("x2", String(pb.x));
      line.setAttribute("y2", String(pb.y));
      line.setAttribute("stroke-width", String(0.75 + 4.25 * (e.weight / wMax)));
      line.setAttribute("class", cut ? "graph-edge cut" : "graph-edge");
      svg.appendChild(line);
    }
    for (const v of doc.vertices) {
      const p = pos.get(v)!;
      const label = plan?.assignment[v];
      const dot = document.createElementNS(ns, "circle");
      dot.setAttribute("cx", String(p.x));
      dot.setAttribute("cy", String(p.y));
      dot.setAttribute("r", "9");
      dot.setAttribute("fill", label === undefined ? "#999" : colorFor(label));
      dot.setAttribute("class", "graph-node");
      dot.setAttribute("data-zone", v);
      if (label !== undefined) dot.setAttribute("data-island", String(label));
      svg.appendChild(dot);
      const text = document.createElementNS(ns, "text");
      text.setAttribute("x", String(p.x));
      text.setAttribute("y", String(p.y - 12));
      text.setAttribute("text-anchor", "middle");
      text.setAttribute("class", "graph-label");
      text.textContent = v;
      svg.appendChild(text);
    }
  }

  return { update };
}
