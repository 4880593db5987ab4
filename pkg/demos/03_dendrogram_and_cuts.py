"""Dendrogram anatomy: merge order, costs, and what cutting at r means.

Note the merge costs need not rise monotonically: the connectivity
constraint sometimes forces an expensive merge early because the cheap
pair shares no tie-line. Cutting is therefore defined by merge count.
"""

from gridsplit import p_metric, synth
from gridsplit.clustering import constrained_ward_cluster, cut
from gridsplit.spectral import spectral_report

g, _ = synth.planted_zone_graph()
d = constrained_ward_cluster(spectral_report(g).embedding, g)

print("last ten merges (the interesting, expensive ones):")
print("  step  join                cost      feasible pairs")
n = g.order
for step, m in enumerate(d.merges[-10:], start=len(d.merges) - 9):
    def label(cid):
        members = d.members(cid)
        return g.vertices[members[0]] + (f"+{len(members) - 1}" if len(members) > 1 else "")
    print(f"  {step:4d}  {label(m.cluster_a):>8} | {label(m.cluster_b):<8} "
          f"{m.merge_cost:8.4f}   {m.feasible_pairs:5d}")

print("\ncut level vs partition quality:")
print("   r   clusters (sizes)        p")
for r in (1, 2, 3, 4, 6, 9):
    part = cut(d, r)
    sizes = sorted((len(c) for c in part.clusters()), reverse=True)
    print(f"  {r:2d}   {str(sizes):<22} {p_metric(g, part):8.4f}")

print("\nnested refinement: the r=4 partition splits exactly one r=3 cluster")
coarse, fine = cut(d, 3), cut(d, 4)
for members in fine.clusters():
    parents = {coarse.assignment[v] for v in members}
    assert len(parents) == 1
print("checked: every r=4 cluster sits inside one r=3 cluster")
