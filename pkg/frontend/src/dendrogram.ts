/** SVG dendrogram with a draggable horizontal cut line.
 *
 * The vertical axis is merge order, not cost: under the connectivity
 * constraint costs may invert, and cutting is defined by merge count. The
 * cut line between merge k and k+1 yields r = N - k clusters.
 */

import type { DendrogramDoc, PlanDoc } from "./types.js";
import { colorFor } from "./palette.js";

export const MARGIN_TOP = 16;
export const MARGIN_BOTTOM = 56;

export interface TreeLayout {
  leafX: Map<number, number>; // leaf id -> x slot
  nodeX: Map<number, number>; // every cluster id -> x
  nodeY: Map<number, number>; // cluster id -> y (leaves at baseline)
}

/** y pixel of the cut line that produces r clusters. */
export function yForCut(r: number, n: number, height: number): number {
  const usable = height - MARGIN_TOP - MARGIN_BOTTOM;
  const k = n - r; // merges applied below the line
  return MARGIN_TOP + usable * (1 - (k + 0.5) / Math.max(n - 1, 1));
}

/** inverse of yForCut with clamping into [1, n]. */
export function rForCutY(y: number, n: number, height: number): number {
  const usable = height - MARGIN_TOP - MARGIN_BOTTOM;
  const frac = 1 - (y - MARGIN_TOP) / Math.max(usable, 1);
  const k = Math.round(frac * Math.max(n - 1, 1) - 0.5);
  return Math.max(1, Math.min(n, n - k));
}

export function layoutTree(doc: DendrogramDoc, height: number): TreeLayout {
  const n = doc.leaves.length;
  const children = new Map<number, [number, number]>();
  for (const m of doc.merges) {
    children.set(m.new_cluster_id, [m.cluster_a, m.cluster_b]);
  }
  // leaf order from a depth-first walk of the final tree keeps branches
  // from crossing
  const order: number[] = [];
  const roots = rootIds(doc);
  const walk = (id: number): void => {
    const pair = children.get(id);
    if (pair === undefined) {
      order.push(id);
      return;
    }
    walk(pair[0]);
    walk(pair[1]);
  };
  for (const root of roots) walk(root);

  const leafX = new Map<number, number>();
  order.forEach((leaf, slot) => leafX.set(leaf, slot));

  const usable = height - MARGIN_TOP - MARGIN_BOTTOM;
  const baseline = MARGIN_TOP + usable;
  const nodeX = new Map<number, number>(leafX);
  const nodeY = new Map<number, number>();
  for (const leaf of order) nodeY.set(leaf, baseline);
  doc.merges.forEach((m, step) => {
    const x = (nodeX.get(m.cluster_a)! + nodeX.get(m.cluster_b)!) / 2;
    nodeX.set(m.new_cluster_id, x);
    nodeY.set(m.new_cluster_id, baseline - (usable * (step + 1)) / Math.max(n - 1, 1));
  });
  return { leafX, nodeX, nodeY };
}

function rootIds(doc: DendrogramDoc): number[] {
  const used = new Set<number>();
  for (const m of doc.merges) {
    used.add(m.cluster_a);
    used.add(m.cluster_b);
  }
  const roots: number[] = [];
  const total = doc.leaves.length + doc.merges.length;
  for (let id = 0; id < total; id++) {
    if (!used.has(id)) roots.push(id);
  }
  return roots;
}

export interface DendrogramView {
  update(): void;
}

export function mountDendrogram(
  container: HTMLElement,
  getState: () => {
    dendrogram: DendrogramDoc | null;
    plan: PlanDoc | null;
    pendingR: number;
  },
  requestR: (r: number) => void,
  width = 560,
  height = 420,
): DendrogramView {
  const ns = "http://www.w3.org/2000/svg";
  const svg = document.createElementNS(ns, "svg");
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  svg.setAttribute("class", "dendrogram");
  container.appendChild(svg);

  let dragging = false;

  const onMove = (event: MouseEvent): void => {
    if (!dragging) return;
    const doc = getState().dendrogram;
    if (doc === null) return;
    const top = svg.getBoundingClientRect().top;
    requestR(rForCutY(event.clientY - top, doc.leaves.length, height));
  };
  const onUp = (): void => {
    dragging = false;
  };
  window.addEventListener("mousemove", onMove);
  window.addEventListener("mouseup", onUp);

  function update(): void {
    const { dendrogram: doc, plan, pendingR } = getState();
    svg.textContent = "";
    if (doc === null) return;
    const n = doc.leaves.length;
    const layout = layoutTree(doc, height);
    const slotW = (width - 24) / Math.max(n, 1);
    const px = (slot: number): number => 12 + slotW * (slot + 0.5);

    for (const m of doc.merges) {
      const xa = px(layout.nodeX.get(m.cluster_a)!);
      const xb = px(layout.nodeX.get(m.cluster_b)!);
      const ya = layout.nodeY.get(m.cluster_a)!;
      const yb = layout.nodeY.get(m.cluster_b)!;
      const y = layout.nodeY.get(m.new_cluster_id)!;
      const path = document.createElementNS(ns, "path");
      path.setAttribute("d", `M ${xa} ${ya} V ${y} H ${xb} V ${yb}`);
      path.setAttribute("class", "merge-link");
      svg.appendChild(path);
    }

    doc.leaves.forEach((name, leaf) => {
      const x = px(layout.leafX.get(leaf)!);
      const y = layout.nodeY.get(leaf)!;
      const dot = document.createElementNS(ns, "circle");
      dot.setAttribute("cx", String(x));
      dot.setAttribute("cy", String(y));
      dot.setAttribute("r", "5");
      dot.setAttribute("class", "leaf-dot");
      const label = plan?.assignment[name];
      dot.setAttribute("fill", label === undefined ? "#999" : colorFor(label));
      dot.setAttribute("data-leaf", name);
      if (label !== undefined) dot.setAttribute("data-island", String(label));
      svg.appendChild(dot);
      const text = document.createElementNS(ns, "text");
      text.setAttribute("x", String(x));
      text.setAttribute("y", String(y + 14));
      text.setAttribute("class", "leaf-label");
      text.setAttribute(
        "transform",
        `rotate(60 ${x} ${y + 14})`,
      );
      text.textContent = name;
      svg.appendChild(text);
    });

    const cutY = yForCut(pendingR, n, height);
    const line = document.createElementNS(ns, "line");
    line.setAttribute("x1", "4");
    line.setAttribute("x2", String(width - 4));
    line.setAttribute("y1", String(cutY));
    line.setAttribute("y2", String(cutY));
    line.setAttribute("class", "cut-line");
    svg.appendChild(line);

    const grip = document.createElementNS(ns, "rect");
    grip.setAttribute("x", "4");
    grip.setAttribute("y", String(cutY - 7));
    grip.setAttribute("width", String(width - 8));
    grip.setAttribute("height", "14");
    grip.setAttribute("class", "cut-grip");
    grip.setAttribute("data-role", "cut-grip");
    grip.addEventListener("mousedown", (event) => {
      dragging = true;
      event.preventDefault();
    });
    svg.appendChild(grip);

    const tag = document.createElementNS(ns, "text");
    tag.setAttribute("x", String(width - 8));
    tag.setAttribute("y", String(cutY - 10));
    tag.setAttribute("class", "cut-tag");
    tag.setAttribute("text-anchor", "end");
    tag.textContent = `r = ${pendingR}`;
    svg.appendChild(tag);
  }

  return { update };
}
