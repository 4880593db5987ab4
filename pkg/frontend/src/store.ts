/** Explorer state: one committed (r, plan, report) triple at a time.
 *
 * Interaction model: dragging the cut (or clicking a sweep point) calls
 * requestR repeatedly; the store shows the pending level immediately but
 * only after the debounce window does it issue exactly one /plan and one
 * /evaluate request. Responses carry a sequence number; anything that is
 * not the latest request is discarded, so panels can never mix data from
 * two different r values. Failures keep the last good state: a network
 * error raises a retryable banner, an infeasible r snaps the handle back.
 */

import { ApiClient, ServiceError } from "./api.js";
import type {
  CaseSummary,
  DendrogramDoc,
  PlanDoc,
  ReportDoc,
  SweepRow,
  ZoneGraphDoc,
} from "./types.js";

export interface ExplorerState {
  summary: CaseSummary | null;
  graph: ZoneGraphDoc | null;
  dendrogram: DendrogramDoc | null;
  sweep: SweepRow[];
  currentR: number; // the committed level every panel reflects
  pendingR: number; // where the drag handle sits right now
  plan: PlanDoc | null;
  report: ReportDoc | null;
  loading: boolean;
  banner: string | null; // service trouble, retryable
  notice: string | null; // inline infeasibility message
}

export type Listener = (state: ExplorerState) => void;

export class ExplorerStore {
  state: ExplorerState = {
    summary: null,
    graph: null,
    dendrogram: null,
    sweep: [],
    currentR: 1,
    pendingR: 1,
    plan: null,
    report: null,
    loading: false,
    banner: null,
    notice: null,
  };

  private listeners: Listener[] = [];
  private seq = 0;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private lastRequested: number | null = null;

  constructor(
    private api: ApiClient,
    private debounceMs = 250,
  ) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private patch(partial: Partial<ExplorerState>): void {
    this.state = { ...this.state, ...partial };
    this.notify();
  }

  get maxR(): number {
    return this.state.dendrogram?.leaves.length ?? 1;
  }

  /** Load the static artifacts, then commit the initial cut level. */
  async boot(initialR: number, sweepMax = 9): Promise<void> {
    this.patch({ loading: true, banner: null });
    try {
      const [summary, graph, dendrogram] = await Promise.all([
        this.api.caseSummary(),
        this.api.graph(),
        this.api.dendrogram(),
      ]);
      let sweep: SweepRow[] = [];
      try {
        sweep = await this.api.sweep(Math.min(sweepMax, dendrogram.leaves.length));
      } catch {
        // a failed sweep only empties the charts; the explorer still works
      }
      this.patch({ summary, graph, dendrogram, sweep });
      await this.commitR(this.clamp(initialR));
    } catch (err) {
      this.patch({ loading: false, banner: describe(err) });
    }
  }

  clamp(r: number): number {
    return Math.max(1, Math.min(this.maxR, Math.round(r)));
  }

  /** Move the cut handle; fetch after the debounce window goes quiet. */
  requestR(r: number): void {
    const clamped = this.clamp(r);
    this.patch({ pendingR: clamped, notice: null });
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      if (this.state.pendingR !== this.state.currentR) {
        void this.commitR(this.state.pendingR);
      }
    }, this.debounceMs);
  }

  /** Re-issue the last failed commit (banner retry button). */
  retry(): void {
    const target = this.lastRequested ?? this.state.pendingR;
    if (this.state.dendrogram === null) {
      void this.boot(target);
    } else {
      void this.commitR(target);
    }
  }

  private async commitR(r: number): Promise<void> {
    const ticket = ++this.seq;
    this.lastRequested = r;
    this.patch({ loading: true });
    try {
      const [plan, report] = await Promise.all([
        this.api.plan(r),
        this.api.evaluate(r),
      ]);
      if (ticket !== this.seq) return; // superseded by a newer request
      this.patch({
        currentR: r,
        pendingR: r,
        plan,
        report,
        loading: false,
        banner: null,
        notice: null,
      });
    } catch (err) {
      if (ticket !== this.seq) return;
      if (err instanceof ServiceError && err.status === 422) {
        // infeasible cut: snap the handle back, keep the good panels
        this.patch({
          loading: false,
          pendingR: this.state.currentR,
          notice: `r=${r} infeasible: ${err.message}`,
        });
      } else {
        this.patch({
          loading: false,
          pendingR: this.state.currentR,
          banner: describe(err),
        });
      }
    }
  }
}

function describe(err: unknown): string {
  if (err instanceof ServiceError) {
    return err.status === 0
      ? `service unreachable: ${err.message}`
      : `service error ${err.status}: ${err.message}`;
  }
  return String(err);
}
