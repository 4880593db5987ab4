/** Thin typed client over the service's read-only GET endpoints.
 *
 * The UI computes nothing itself: everything it shows comes out of these
 * payloads, so the client is the complete inventory of inputs.
 */

import type {
  CaseSummary,
  DendrogramDoc,
  PlanDoc,
  ReportDoc,
  SweepRow,
  ZoneGraphDoc,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    public status: number,
    public kind: string,
    message: string,
  ) {
    super(message);
  }
}

async function getBody(base: string, path: string): Promise<string> {
  let response: Response;
  try {
    response = await fetch(base + path);
  } catch (err) {
    throw new ServiceError(0, "unreachable", String(err));
  }
  const text = await response.text();
  if (!response.ok) {
    let kind = "error";
    let message = text;
    try {
      const doc = JSON.parse(text);
      kind = doc.error ?? kind;
      message = doc.message ?? message;
    } catch {
      // non-JSON error body: keep raw text
    }
    throw new ServiceError(response.status, kind, message);
  }
  return text;
}

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text.trim().split("\n");
  if (lines.length <= 1) return [];
  const header = lines[0].split(",");
  const col = (name: string) => header.indexOf(name);
  const ir = col("r");
  const ii = col("max_imbalance_mw");
  const is = col("switching_count");
  const ip = col("p");
  return lines.slice(1).map((line) => {
    const parts = line.split(",");
    const p = Number(parts[ip]);
    return {
      r: Number(parts[ir]),
      max_imbalance_mw: Number(parts[ii]),
      switching_count: Number(parts[is]),
      p: Number.isFinite(p) ? p : null,
    };
  });
}

export class ApiClient {
  constructor(public base: string = "") {}

  async caseSummary(): Promise<CaseSummary> {
    return JSON.parse(await getBody(this.base, "/case/summary"));
  }

  async graph(): Promise<ZoneGraphDoc> {
    return JSON.parse(await getBody(this.base, "/graph"));
  }

  async dendrogram(): Promise<DendrogramDoc> {
    return JSON.parse(await getBody(this.base, "/dendrogram"));
  }

  async plan(r: number): Promise<PlanDoc> {
    return JSON.parse(await getBody(this.base, `/plan?r=${r}`));
  }

  async evaluate(r: number): Promise<ReportDoc> {
    return JSON.parse(await getBody(this.base, `/evaluate?r=${r}`));
  }

  async sweep(max: number): Promise<SweepRow[]> {
    return parseSweepCsv(await getBody(this.base, `/sweep?max=${max}`));
  }
}
