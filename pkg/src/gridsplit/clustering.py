"""Connectivity-constrained Ward agglomeration over embedded vertices.

Plain Ward would happily merge two zones that sit close in spectral space
but share no tie-line; the resulting "island" could never be operated. The
constraint here is therefore topological: a merge is feasible only when at
least one original-graph edge joins the two clusters. Among feasible pairs
the usual Ward criterion (minimum within-cluster variance increase) picks
the merge; the Lance-Williams recurrence keeps the update exact and O(N^2).

Reported merge costs follow the common "ward distance" convention,
sqrt(2 * variance increase), so two singletons merge at exactly their
Euclidean distance. Under the connectivity constraint the cost sequence
need not be monotone, which is why cutting is defined by merge count and
never by a cost threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .zonegraph import ZoneGraph, subgraph_connected

DENDRO_SCHEMA = "gridsplit-dendro/1"


@dataclass(frozen=True)
class Merge:
    cluster_a: int            # child cluster ids; leaves are 0..N-1
    cluster_b: int
    merge_cost: float         # ward distance, sqrt(2 * delta variance)
    new_cluster_id: int       # N, N+1, ... in merge order
    feasible_pairs: int       # how many graph-adjacent pairs were available


@dataclass(frozen=True)
class Dendrogram:
    leaves: tuple[str, ...]
    merges: tuple[Merge, ...]

    @property
    def order(self) -> int:
        return len(self.leaves)

    def members(self, cluster_id: int) -> tuple[int, ...]:
        """Leaf indices contained in a cluster id (leaf or merged)."""
        n = self.order
        if cluster_id < n:
            return (cluster_id,)
        merge = self.merges[cluster_id - n]
        return self.members(merge.cluster_a) + self.members(merge.cluster_b)

    def to_dict(self) -> dict:
        return {
            "schema": DENDRO_SCHEMA,
            "leaves": list(self.leaves),
            "merges": [
                {
                    "cluster_a": m.cluster_a,
                    "cluster_b": m.cluster_b,
                    "cost": m.merge_cost,
                    "new_cluster_id": m.new_cluster_id,
                    "feasible_pairs": m.feasible_pairs,
                }
                for m in self.merges
            ],
        }


@dataclass(frozen=True)
class Partition:
    r: int
    assignment: dict[str, int]     # vertex id -> cluster label 1..r

    def clusters(self) -> list[list[str]]:
        out: list[list[str]] = [[] for _ in range(self.r)]
        for v, label in self.assignment.items():
            out[label - 1].append(v)
        return out

    def labels_for(self, vertices: tuple[str, ...]) -> list[int]:
        return [self.assignment[v] for v in vertices]


def dendrogram_from_dict(doc: dict) -> Dendrogram:
    if doc.get("schema") != DENDRO_SCHEMA:
        raise ValidationError(f"unsupported dendrogram schema {doc.get('schema')!r}")
    return Dendrogram(
        leaves=tuple(str(v) for v in doc["leaves"]),
        merges=tuple(
            Merge(
                cluster_a=int(m["cluster_a"]), cluster_b=int(m["cluster_b"]),
                merge_cost=float(m["cost"]), new_cluster_id=int(m["new_cluster_id"]),
                feasible_pairs=int(m.get("feasible_pairs", 0)),
            )
            for m in doc["merges"]
        ),
    )


def constrained_ward_cluster(embedding: np.ndarray, g: ZoneGraph) -> Dendrogram:
    """Agglomerate the embedded vertices under the graph-connectivity constraint.

    At every step the feasible (graph-adjacent) pair with minimum Ward cost
    merges; exact ties go to the lexicographically smallest (id_a, id_b).
    Requires a connected graph, otherwise no sequence of feasible merges can
    reach a single cluster.
    """
    x = np.asarray(embedding, dtype=float)
    n = g.order
    if x.ndim != 2 or x.shape[0] != n:
        raise ValidationError(
            f"embedding has {x.shape[0] if x.ndim == 2 else '?'} rows for {n} vertices"
        )
    if n < 1:
        raise ValidationError("empty graph")

    total = 2 * n - 1
    size = np.zeros(total)
    size[:n] = 1.0
    # squared ward distances between active clusters; singletons start at
    # squared euclidean distance
    d2 = np.full((total, total), np.inf)
    for i in range(n):
        for j in range(i + 1, n):
            d2[i, j] = d2[j, i] = float(((x[i] - x[j]) ** 2).sum())

    adjacency: dict[int, set[int]] = {i: set() for i in range(n)}
    for a, b, _ in g.edges:
        adjacency[a].add(b)
        adjacency[b].add(a)

    active = set(range(n))
    merges: list[Merge] = []
    for step in range(n - 1):
        best: tuple[float, int, int] | None = None
        feasible = 0
        for a in sorted(active):
            for b in sorted(adjacency[a]):
                if b <= a or b not in active:
                    continue
                feasible += 1
                cost = d2[a, b]
                if best is None or cost < best[0]:
                    best = (cost, a, b)
        if best is None:
            frontier = sorted(active)
            raise ValidationError(
                f"graph is disconnected: no feasible merge among clusters {frontier}",
                findings=[f"{len(frontier)} mutually non-adjacent clusters remain"],
            )
        cost, a, b = best
        new_id = n + step
        merges.append(
            Merge(
                cluster_a=a, cluster_b=b, merge_cost=float(np.sqrt(cost)),
                new_cluster_id=new_id, feasible_pairs=feasible,
            )
        )
        # Lance-Williams update for ward linkage on squared distances
        na, nb = size[a], size[b]
        for k in active:
            if k in (a, b):
                continue
            nk = size[k]
            d2[new_id, k] = d2[k, new_id] = (
                (na + nk) * d2[a, k] + (nb + nk) * d2[b, k] - nk * d2[a, b]
            ) / (na + nb + nk)
        size[new_id] = na + nb
        adjacency[new_id] = (adjacency[a] | adjacency[b]) - {a, b}
        for k in adjacency[new_id]:
            adjacency[k].discard(a)
            adjacency[k].discard(b)
            adjacency[k].add(new_id)
        active.discard(a)
        active.discard(b)
        active.add(new_id)

    return Dendrogram(leaves=g.vertices, merges=tuple(merges))


def cut(d: Dendrogram, r: int) -> Partition:
    """Undo the last r-1 merges: the clusters present after N-r merges.

    Labels are 1..r, ordered by each cluster's smallest leaf index so equal
    inputs always produce the identical labelling.
    """
    n = d.order
    if not 1 <= r <= n:
        raise ValidationError(f"cluster count r={r} outside [1, {n}]")
    parent = list(range(2 * n - 1))
    for merge in d.merges[: n - r]:
        parent[merge.cluster_a] = merge.new_cluster_id
        parent[merge.cluster_b] = merge.new_cluster_id

    def root(i: int) -> int:
        while parent[i] != i:
            i = parent[i]
        return i

    groups: dict[int, list[int]] = {}
    for leaf in range(n):
        groups.setdefault(root(leaf), []).append(leaf)
    ordered = sorted(groups.values(), key=lambda leaves: leaves[0])
    assignment = {
        d.leaves[leaf]: label
        for label, leaves in enumerate(ordered, start=1)
        for leaf in leaves
    }
    return Partition(r=r, assignment=assignment)


def check_partition_connected(g: ZoneGraph, p: Partition) -> list[str]:
    """Findings for clusters that do not induce a connected subgraph."""
    findings = []
    for label, members in enumerate(p.clusters(), start=1):
        idx = {g.index(v) for v in members}
        if not subgraph_connected(g, idx):
            findings.append(f"cluster {label} ({sorted(members)}) is not connected")
    return findings
