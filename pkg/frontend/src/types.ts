/** Payload shapes of the analysis service (versioned JSON schemas). */

export interface CaseSummary {
  schema: string;
  digest: string;
  base_mva: number;
  buses: number;
  branches: number;
  generators: number;
  loads: number;
  shunts: number;
  zones: string[];
  external_zones: string[];
  total_generation_mw: number;
  total_load_mw: number;
}

export interface GraphEdge {
  a: string;
  b: string;
  weight: number;
}

export interface ZoneGraphDoc {
  schema: string;
  vertices: string[];
  edges: GraphEdge[];
}

export interface DendrogramMerge {
  cluster_a: number;
  cluster_b: number;
  cost: number;
  new_cluster_id: number;
  feasible_pairs: number;
}

export interface DendrogramDoc {
  schema: string;
  leaves: string[];
  merges: DendrogramMerge[];
}

export interface IslandSpec {
  label: number;
  vertices: string[];
  zones: string[];
  buses: number[];
  gen_mw: number;
  load_mw: number;
  imbalance_mw: number;
}

export interface PlanDoc {
  schema: string;
  r: number;
  assignment: Record<string, number>;
  islands: IslandSpec[];
  cut_lines: number[];
  ei_attached: number | null;
}

export interface IslandResult {
  label: number;
  zones: string[];
  redispatch_mw: number;
  shed_mw: number;
  converged: boolean;
  min_voltage: number | null;
  overload_count: number;
  unscreened_branches: number;
  slack_bus: number | null;
  slack_residual_mw: number | null;
  viable: boolean;
  note: string;
}

export interface ReportDoc {
  schema: string;
  r: number;
  p: number | null; // null encodes an undefined (infinite) ratio
  switching_count: number;
  cut_lines: number[];
  islands: IslandResult[];
}

export interface SweepRow {
  r: number;
  max_imbalance_mw: number;
  switching_count: number;
  p: number | null;
}
