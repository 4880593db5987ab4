"""Smallest interesting walkthrough: two zones, one tie, one decision.

Builds the toy case, solves the intact system, aggregates it to a two-vertex
zone graph, and evaluates the only possible split. Run:

    python3 demos/01_two_zone_walkthrough.py
"""

import gridsplit as gs
from gridsplit import synth
from gridsplit.clustering import constrained_ward_cluster, cut
from gridsplit.islanding import build_plan, evaluate
from gridsplit.spectral import spectral_report
from gridsplit.zonegraph import build_zone_graph

case = synth.two_zone_case()
print(f"case: {len(case.buses)} buses, {len(case.branches)} branch, zones {case.zones}")

# intact power flow; the tie carries whatever zone B cannot supply itself
sol = gs.solve(case)
print(f"intact solve: converged={sol.converged} in {sol.iterations} evaluations")
print(f"tie flow: {sol.s_from[0]:.2f} MVA from A toward B")

flows = gs.branch_flows(sol, case)
g = build_zone_graph(case, flows)
print(f"zone graph: vertices={g.vertices} edge weight={g.edges[0][2]:.1f} MVA")

report = spectral_report(g)
d = constrained_ward_cluster(report.embedding, g)
plan = build_plan(case, g, cut(d, 2))
print(f"plan r=2: cut lines={plan.cut_lines}")
for island in plan.islands:
    print(f"  island {island.label}: zones={island.zones} "
          f"gen={island.gen_mw:.0f} MW load={island.load_mw:.0f} MW "
          f"imbalance={island.imbalance_mw:+.0f} MW")

result, _ = evaluate(case, g, plan)
# with both islands single zones there is no intra-cluster weight left,
# so the disruption ratio p is undefined (reported as infinite)
p_text = f"{result.p:.3f}" if result.p != float("inf") else "undefined"
print(f"after redispatch (p = {p_text}):")
for island in result.islands:
    print(f"  island {island.label}: redispatch={island.redispatch_mw:+.1f} MW "
          f"shed={island.shed_mw:.1f} MW minV={island.min_voltage:.3f} "
          f"viable={island.viable}")
