/** Boot the explorer: fetch artifacts, wire panels, sync ?r= in the URL. */

import { ApiClient } from "./api.js";
import { ExplorerStore } from "./store.js";
import { mountDendrogram } from "./dendrogram.js";
import { mountCharts } from "./charts.js";
import { mountGraph } from "./graphview.js";
import { mountPanels } from "./panels.js";

export function createApp(root: HTMLElement, api: ApiClient, debounceMs = 250): ExplorerStore {
  root.innerHTML = `
    <header>
      <h1>island explorer</h1>
      <div id="case-line" class="case-line"></div>
    </header>
    <div id="banner-box"></div>
    <main>
      <section class="pane">
        <h2>dendrogram <small>drag the line to cut</small></h2>
        <div id="dendrogram-box"></div>
      </section>
      <section class="pane">
        <h2>zone graph</h2>
        <div id="graph-box"></div>
      </section>
      <section class="pane" id="metrics-box"></section>
    </main>
    <section class="pane">
      <h2>sweep <small>click a point to set r</small></h2>
      <div id="charts-box" class="charts"></div>
    </section>
  `;

  const store = new ExplorerStore(api, debounceMs);
  const byId = (id: string): HTMLElement => root.querySelector(`#${id}`)!;

  const dendro = mountDendrogram(
    byId("dendrogram-box"),
    () => ({
      dendrogram: store.state.dendrogram,
      plan: store.state.plan,
      pendingR: store.state.pendingR,
    }),
    (r) => store.requestR(r),
  );
  const graph = mountGraph(byId("graph-box"), () => ({
    graph: store.state.graph,
    plan: store.state.plan,
  }));
  const charts = mountCharts(
    byId("charts-box"),
    () => ({ sweep: store.state.sweep, currentR: store.state.currentR }),
    (r) => store.requestR(r),
  );
  const panels = mountPanels(
    byId("case-line"),
    byId("banner-box"),
    byId("metrics-box"),
    () => store.state,
    () => store.retry(),
  );

  store.subscribe(() => {
    dendro.update();
    graph.update();
    charts.update();
    panels.update();
  });

  return store;
}

function initialR(): number {
  const raw = new URLSearchParams(window.location.search).get("r");
  const r = raw === null ? NaN : Number(raw);
  return Number.isInteger(r) && r >= 1 ? r : 2;
}

export function syncUrl(store: ExplorerStore): void {
  let last = -1;
  store.subscribe((state) => {
    if (state.currentR !== last && state.plan !== null) {
      last = state.currentR;
      const url = new URL(window.location.href);
      url.searchParams.set("r", String(state.currentR));
      window.history.replaceState(null, "", url.toString());
    }
  });
}

// only boot against the real service when loaded in a page, not under tests
if (typeof document !== "undefined" && document.getElementById("app") !== null) {
  const root = document.getElementById("app")!;
  const store = createApp(root, new ApiClient(""));
  syncUrl(store);
  void store.boot(initialR());
}
