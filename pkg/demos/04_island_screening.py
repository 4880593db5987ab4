"""Redispatch, shedding, and per-island power-flow screening.

The deficit fixture is built so zone C cannot cover its own load: its
island must shed. Watch the balance actions differ island by island,
then check each island's steady state with its own slack.
"""

import gridsplit as gs
from gridsplit import synth
from gridsplit.clustering import constrained_ward_cluster, cut
from gridsplit.islanding import build_plan, evaluate, redispatch_and_shed
from gridsplit.spectral import spectral_report
from gridsplit.zonegraph import build_zone_graph

case = synth.deficit_case()
sol = gs.solve(case)
g = build_zone_graph(case, gs.branch_flows(sol, case))
d = constrained_ward_cluster(spectral_report(g).embedding, g)
plan = build_plan(case, g, cut(d, 3))

print("pre-action island balances:")
for island in plan.islands:
    print(f"  island {island.label} {island.zones}: gen={island.gen_mw:.0f} MW "
          f"load={island.load_mw:.0f} MW imbalance={island.imbalance_mw:+.0f} MW")

balanced, records = redispatch_and_shed(case, plan)
print("\nbalancing actions (3% loss margin):")
for rec in records:
    print(f"  island {rec.label}: redispatch={rec.redispatch_mw:+.1f} MW "
          f"shed={rec.shed_mw:.1f} MW feasible={rec.feasible} {rec.note}")

report, solutions = evaluate(case, g, plan)
print(f"\nscreening ({report.switching_count} lines switched, p={report.p:.3f}):")
for island in report.islands:
    print(f"  island {island.label}: converged={island.converged} "
          f"minV={island.min_voltage:.3f} slack=bus {island.slack_bus} "
          f"residual={island.slack_residual_mw:+.2f} MW viable={island.viable}")

# the slack residual is the loss margin coming back as real losses
for label, isol in solutions.items():
    bal = gs.power_balance(isol, balanced)
    print(f"  island {label} losses: {bal['loss_mw']:.2f} MW")
