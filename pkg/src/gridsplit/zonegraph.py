"""Aggregate a bus-level case into the simple weighted undirected zone graph.

Zones become vertices; the weight of edge (i, j) is the summed apparent-power
magnitude (MVA) over the in-service AC tie-lines joining zones i and j, so a
heavy edge means tight electrical coupling. HVDC ties contribute nothing:
they do not propagate disturbances. Everything outside the study footprint
may be collapsed to a single vertex ``X`` or dropped entirely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .network import NetworkCase

GRAPH_SCHEMA = "gridsplit-graph/1"

EXTERNAL_VERTEX = "X"

# a tie whose flow happens to be near zero still couples the zones
# electrically; keep the edge so the connectivity constraint sees it
WEIGHT_FLOOR_MVA = 0.1


@dataclass(frozen=True)
class ZoneGraph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int, float], ...]    # (i, j, weight MVA), i < j

    @property
    def order(self) -> int:
        return len(self.vertices)

    def index(self, vertex: str) -> int:
        try:
            return self.vertices.index(vertex)
        except ValueError:
            raise ValidationError(f"unknown vertex {vertex!r}") from None

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.order, self.order))
        for i, j, w in self.edges:
            a[i, j] = a[j, i] = w
        return a

    def neighbors(self, i: int) -> set[int]:
        out = set()
        for a, b, _ in self.edges:
            if a == i:
                out.add(b)
            elif b == i:
                out.add(a)
        return out

    def edge_weight(self, i: int, j: int) -> float:
        i, j = min(i, j), max(i, j)
        for a, b, w in self.edges:
            if (a, b) == (i, j):
                return w
        return 0.0

    def is_connected(self) -> bool:
        if self.order == 0:
            return False
        seen = {0}
        frontier = [0]
        while frontier:
            v = frontier.pop()
            for nb in self.neighbors(v):
                if nb not in seen:
                    seen.add(nb)
                    frontier.append(nb)
        return len(seen) == self.order

    def to_dict(self) -> dict:
        return {
            "schema": GRAPH_SCHEMA,
            "vertices": list(self.vertices),
            "edges": [
                {"a": self.vertices[i], "b": self.vertices[j], "weight": w}
                for i, j, w in self.edges
            ],
        }

    def to_dot(self) -> str:
        """GraphViz rendering with edge thickness proportional to weight."""
        wmax = max((w for _, _, w in self.edges), default=1.0)
        lines = ["graph zones {", "  layout=neato;", "  node [shape=circle];"]
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for i, j, w in self.edges:
            pen = 0.5 + 4.5 * w / wmax
            lines.append(
                f'  "{self.vertices[i]}" -- "{self.vertices[j]}" '
                f'[penwidth={pen:.3f}, label="{w:.1f}"];'
            )
        lines.append("}")
        return "\n".join(lines) + "\n"


def graph_from_dict(doc: dict) -> ZoneGraph:
    if doc.get("schema") != GRAPH_SCHEMA:
        raise ValidationError(f"unsupported graph schema {doc.get('schema')!r}")
    vertices = tuple(str(v) for v in doc["vertices"])
    pos = {v: i for i, v in enumerate(vertices)}
    edges = []
    for e in doc["edges"]:
        i, j = pos[str(e["a"])], pos[str(e["b"])]
        edges.append((min(i, j), max(i, j), float(e["weight"])))
    return ZoneGraph(vertices=vertices, edges=tuple(sorted(edges)))


def build_zone_graph(case: NetworkCase,
                     flows: tuple[dict[int, complex], dict[int, complex]],
                     include_external: bool = True) -> ZoneGraph:
    """Collapse the case onto its zones, weighting edges by tie-line flow.

    ``flows`` is the (S_from, S_to) pair from :func:`powerflow.branch_flows`
    (or :func:`powerflow.setpoint_flows` for a pre-solved case) and must
    cover every in-service AC branch. A branch's contribution is the larger
    of its two end magnitudes: losses make |S| end-dependent and the larger
    value is the conservative coupling estimate.

    With ``include_external`` the zones listed in ``case.external_zones``
    collapse onto the single vertex ``X``; otherwise they and their ties are
    dropped from the graph.
    """
    s_from, s_to = flows
    bus_zone = {b.id: b.zone for b in case.buses}
    study = [z for z in case.zones if z not in case.external_zones]
    if not study:
        raise ValidationError("empty study footprint: every zone is external")
    if include_external and EXTERNAL_VERTEX in study and any(
        z in case.external_zones for z in case.zones
    ):
        raise ValidationError(
            f"study zone named {EXTERNAL_VERTEX!r} collides with the external vertex"
        )

    has_external = any(z in case.external_zones for z in case.zones)
    vertices = tuple(sorted(study)) + (
        (EXTERNAL_VERTEX,) if include_external and has_external else ()
    )
    pos = {z: i for i, z in enumerate(sorted(study))}
    if include_external and has_external:
        for z in case.external_zones:
            pos[z] = len(vertices) - 1

    sums: dict[tuple[int, int], float] = {}
    for i, br in enumerate(case.branches):
        if not br.in_service or br.is_hvdc:
            continue
        za, zb = bus_zone[br.from_bus], bus_zone[br.to_bus]
        if za not in pos or zb not in pos:
            continue                       # touches a dropped external zone
        if i not in s_from:
            raise ValidationError(
                f"missing flow for in-service AC branch {i} ({br.from_bus}-{br.to_bus})"
            )
        a, b = pos[za], pos[zb]
        if a == b:
            continue                       # intra-zone, or both ends collapse onto X
        w = max(abs(s_from[i]), abs(s_to[i]))
        key = (min(a, b), max(a, b))
        sums[key] = sums.get(key, 0.0) + w

    # floor, not drop: zero-flow ties still couple the zones
    edges = tuple(sorted((i, j, max(w, WEIGHT_FLOOR_MVA)) for (i, j), w in sums.items()))
    return ZoneGraph(vertices=vertices, edges=edges)


def weighted_degree(g: ZoneGraph, vertex: str | int) -> float:
    """Total weight of edges incident to the vertex (Eq.-style weighted degree)."""
    i = g.index(vertex) if isinstance(vertex, str) else vertex
    if not 0 <= i < g.order:
        raise ValidationError(f"vertex index {i} out of range")
    return float(sum(w for a, b, w in g.edges if i in (a, b)))


def total_edge_weight(g: ZoneGraph) -> float:
    return float(sum(w for _, _, w in g.edges))


def subgraph_connected(g: ZoneGraph, members: set[int]) -> bool:
    """Is the induced subgraph on ``members`` connected? (BFS)"""
    if not members:
        return False
    adj: dict[int, set[int]] = {m: set() for m in members}
    for a, b, _ in g.edges:
        if a in members and b in members:
            adj[a].add(b)
            adj[b].add(a)
    start = next(iter(members))
    seen = {start}
    frontier = [start]
    while frontier:
        v = frontier.pop()
        for nb in adj[v]:
            if nb not in seen:
                seen.add(nb)
                frontier.append(nb)
    return seen == members
