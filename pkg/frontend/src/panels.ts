/** Case summary line, status banner, and the per-island metrics panel.
 *
 * Every number in the metrics panel is printed verbatim (String(x)) and
 * tagged with a data-field path into the service payload it came from, so
 * a payload capture can audit that the UI invents nothing.
 */

import type { ExplorerState } from "./store.js";

function field(value: number | null, path: string): HTMLElement {
  const span = document.createElement("span");
  span.setAttribute("data-field", path);
  if (value === null) {
    span.setAttribute("data-null", "true");
    span.textContent = "n/a";
  } else {
    span.textContent = String(value);
  }
  return span;
}

function cell(children: (HTMLElement | string)[]): HTMLTableCellElement {
  const td = document.createElement("td");
  for (const child of children) td.append(child);
  return td;
}

export interface PanelsView {
  update(): void;
}

export function mountPanels(
  header: HTMLElement,
  bannerBox: HTMLElement,
  metricsBox: HTMLElement,
  getState: () => ExplorerState,
  retry: () => void,
): PanelsView {
  function renderHeader(state: ExplorerState): void {
    header.textContent = "";
    const s = state.summary;
    if (s === null) {
      header.textContent = "loading case…";
      return;
    }
    const line = document.createElement("span");
    line.textContent =
      `${s.zones.length} zones · ${s.buses} buses · ${s.branches} branches · ` +
      `${s.total_load_mw.toFixed(0)} MW load · case ${s.digest}`;
    header.appendChild(line);
  }

  function renderBanner(state: ExplorerState): void {
    bannerBox.textContent = "";
    if (state.banner !== null) {
      const div = document.createElement("div");
      div.className = "banner error";
      div.setAttribute("data-role", "banner");
      div.textContent = state.banner + " ";
      const button = document.createElement("button");
      button.textContent = "retry";
      button.addEventListener("click", retry);
      div.appendChild(button);
      bannerBox.appendChild(div);
    }
    if (state.notice !== null) {
      const div = document.createElement("div");
      div.className = "banner notice";
      div.setAttribute("data-role", "notice");
      div.textContent = state.notice;
      bannerBox.appendChild(div);
    }
    if (state.loading) {
      const div = document.createElement("div");
      div.className = "banner loading";
      div.textContent = "computing…";
      bannerBox.appendChild(div);
    }
  }

  function renderMetrics(state: ExplorerState): void {
    metricsBox.textContent = "";
    const { plan, report } = state;
    if (plan === null || report === null) return;

    const heading = document.createElement("h2");
    heading.append("islands at r = ", field(report.r, "report.r"));
    metricsBox.appendChild(heading);

    const global = document.createElement("p");
    global.className = "global-metrics";
    global.append(
      "disruption p: ", field(report.p, "report.p"),
      " · lines to switch: ", field(report.switching_count, "report.switching_count"),
    );
    metricsBox.appendChild(global);

    const table = document.createElement("table");
    table.className = "island-table";
    const head = document.createElement("tr");
    for (const title of ["island", "zones", "gen MW", "load MW", "redispatch MW",
                         "shed MW", "min V", "overloads", "viable"]) {
      const th = document.createElement("th");
      th.textContent = title;
      head.appendChild(th);
    }
    table.appendChild(head);

    report.islands.forEach((island, i) => {
      const spec = plan.islands[i];
      const tr = document.createElement("tr");
      tr.className = island.viable ? "island viable" : "island not-viable";
      tr.setAttribute("data-island-row", String(island.label));
      tr.appendChild(cell([field(island.label, `report.islands.${i}.label`)]));
      tr.appendChild(cell([island.zones.join(" ")]));
      tr.appendChild(cell([field(spec.gen_mw, `plan.islands.${i}.gen_mw`)]));
      tr.appendChild(cell([field(spec.load_mw, `plan.islands.${i}.load_mw`)]));
      tr.appendChild(cell([field(island.redispatch_mw, `report.islands.${i}.redispatch_mw`)]));
      tr.appendChild(cell([field(island.shed_mw, `report.islands.${i}.shed_mw`)]));
      tr.appendChild(cell([field(island.min_voltage, `report.islands.${i}.min_voltage`)]));
      tr.appendChild(cell([field(island.overload_count, `report.islands.${i}.overload_count`)]));
      const verdict = document.createElement("td");
      verdict.textContent = island.viable ? "yes" : "NO";
      tr.appendChild(verdict);
      table.appendChild(tr);
    });
    metricsBox.appendChild(table);
  }

  function update(): void {
    const state = getState();
    renderHeader(state);
    renderBanner(state);
    renderMetrics(state);
  }

  return { update };
}
