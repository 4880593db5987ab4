/** Shared test plumbing: fixture loading and a fetch stub with a request log.
 *
 * Fixtures are real service payload captures for the planted 22-zone case
 * (see tests/fixtures/), so parity tests audit the UI against exactly what
 * the backend emits.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

export function fixtureText(name: string): string {
  return readFileSync(join(here, "fixtures", name), "utf8");
}

export function fixtureJson<T>(name: string): T {
  return JSON.parse(fixtureText(name)) as T;
}

export interface FetchStub {
  fetch: typeof fetch;
  log: string[];
  fail: (matcher: string | null) => void; // network-level failure toggle
}

/** Serve the captured payloads; unknown r values get a 422 like the service. */
export function makeFetchStub(): FetchStub {
  const log: string[] = [];
  let failing: string | null = null;

  const routes: Record<string, () => Response> = {
    "/case/summary": () => ok(fixtureText("case_summary.json")),
    "/graph": () => ok(fixtureText("graph.json")),
    "/dendrogram": () => ok(fixtureText("dendrogram.json")),
    "/plan?r=1": () => ok(fixtureText("plan_r1.json")),
    "/plan?r=2": () => ok(fixtureText("plan_r2.json")),
    "/plan?r=3": () => ok(fixtureText("plan_r3.json")),
    "/evaluate?r=1": () => ok(fixtureText("report_r1.json")),
    "/evaluate?r=2": () => ok(fixtureText("report_r2.json")),
    "/evaluate?r=3": () => ok(fixtureText("report_r3.json")),
    "/sweep?max=9": () => ok(fixtureText("sweep_max9.csv")),
  };

  const stub = (async (input: RequestInfo | URL) => {
    const path = String(input);
    log.push(path);
    if (failing !== null && path.includes(failing)) {
      throw new TypeError("fetch failed");
    }
    const route = routes[path];
    if (route !== undefined) return route();
    if (path.startsWith("/plan") || path.startsWith("/evaluate")) {
      return new Response(
        JSON.stringify({ error: "infeasible", message: `no fixture for ${path}` }),
        { status: 422 },
      );
    }
    return new Response(
      JSON.stringify({ error: "not_found", message: path }),
      { status: 404 },
    );
  }) as typeof fetch;

  return {
    fetch: stub,
    log,
    fail: (matcher) => {
      failing = matcher;
    },
  };

  function ok(body: string): Response {
    return new Response(body, { status: 200 });
  }
}

export function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

/** Resolve a data-field path like "report.islands.0.shed_mw" in payloads. */
export function lookup(docs: Record<string, unknown>, path: string): unknown {
  let node: unknown = docs;
  for (const part of path.split(".")) {
    if (node === null || typeof node !== "object") return undefined;
    node = (node as Record<string, unknown>)[part];
  }
  return node;
}
