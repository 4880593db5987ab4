"""Deterministic synthetic networks for tests, demos, and exploration.

Three families:

* a two-zone toy (smallest interesting islanding case);
* a planted three-community zone graph (21 study zones plus the external
  vertex) whose ground-truth grouping an eigengap of 3 must reveal;
* an electrical case realizing the planted topology one bus per zone, so
  the full pipeline (solve, aggregate, embed, cluster, evaluate) has a
  self-contained instance with generators spread widely enough that any
  dendrogram cut yields operable islands.

Everything is seeded; identical calls produce identical objects.
"""

from __future__ import annotations

import numpy as np

from .clustering import Partition
from .network import PQ, PV, SLACK, Branch, Bus, Generator, Load, NetworkCase
from .zonegraph import EXTERNAL_VERTEX, ZoneGraph

PLANTED_SEED = 7

_COMMUNITIES = (
    tuple(f"Z{i:02d}" for i in range(1, 8)),
    tuple(f"Z{i:02d}" for i in range(8, 15)),
    tuple(f"Z{i:02d}" for i in range(15, 22)),
)
# sparse weak couplings between communities, and the strong attachment of
# the external vertex to the first community
_INTER_EDGES = (("Z07", "Z08"), ("Z03", "Z10"), ("Z14", "Z15"), ("Z09", "Z17"),
                ("Z05", "Z21"))
_X_EDGES = ("Z02", "Z04", "Z06")


def two_zone_case() -> NetworkCase:
    """Two single-bus zones joined by one tie; generation matches load."""
    return NetworkCase(
        base_mva=100.0,
        buses=(
            Bus(id=1, zone="A", kind=SLACK, base_kv=230.0, v_mag=1.02),
            Bus(id=2, zone="B", kind=PV, base_kv=230.0, v_mag=1.00),
        ),
        branches=(
            Branch(from_bus=1, to_bus=2, r=0.01, x=0.05, b_shunt=0.01, rating_mva=100.0),
        ),
        generators=(
            Generator(bus=1, p_gen=60.0, p_min=0.0, p_max=150.0, q_min=-80.0, q_max=80.0),
            Generator(bus=2, p_gen=30.0, p_min=0.0, p_max=100.0, q_min=-60.0, q_max=60.0),
        ),
        loads=(
            Load(bus=1, p_load=40.0, q_load=8.0, sheddable_fraction=0.5),
            Load(bus=2, p_load=50.0, q_load=10.0, sheddable_fraction=0.5),
        ),
        zone_names={"A": "Zone A", "B": "Zone B"},
    )


def planted_zone_graph(seed: int = PLANTED_SEED) -> tuple[ZoneGraph, Partition]:
    """Three 7-zone communities plus the external vertex X attached to the
    first one. Intra-community weights are uniform on [8, 10], the sparse
    inter-community couplings on [0.5, 1], and X attaches as strongly as an
    internal member so it groups with its host community.

    Returns the graph and the ground-truth 3-way partition (X with its host).
    """
    rng = np.random.default_rng(seed)
    vertices = tuple(sorted(z for comm in _COMMUNITIES for z in comm)) + (EXTERNAL_VERTEX,)
    pos = {v: i for i, v in enumerate(vertices)}
    edges: list[tuple[int, int, float]] = []
    for comm in _COMMUNITIES:
        for a in range(len(comm)):
            for b in range(a + 1, len(comm)):
                w = float(rng.uniform(8.0, 10.0))
                i, j = pos[comm[a]], pos[comm[b]]
                edges.append((min(i, j), max(i, j), w))
    for za, zb in _INTER_EDGES:
        w = float(rng.uniform(0.5, 1.0))
        i, j = pos[za], pos[zb]
        edges.append((min(i, j), max(i, j), w))
    for z in _X_EDGES:
        w = float(rng.uniform(8.0, 10.0))
        i, j = pos[z], pos[EXTERNAL_VERTEX]
        edges.append((min(i, j), max(i, j), w))

    assignment = {}
    for label, comm in enumerate(_COMMUNITIES, start=1):
        for z in comm:
            assignment[z] = label
    assignment[EXTERNAL_VERTEX] = 1
    return ZoneGraph(vertices=vertices, edges=tuple(sorted(edges))), Partition(
        r=3, assignment=assignment
    )


def planted_case(seed: int = PLANTED_SEED) -> NetworkCase:
    """Electrical realization of the planted topology, one bus per zone.

    Bus i hosts zone Z<i> for i = 1..21; bus 22 is the external grid (zone X,
    slack). Every bus carries both load and a generator with headroom, so
    islands cut at any r remain balanceable. Branch impedance shrinks with
    the planted weight: tight communities are stiff, weak couplings slack.
    """
    graph, _ = planted_zone_graph(seed)
    rng = np.random.default_rng(seed + 1)

    zone_of_bus = {}
    for i, z in enumerate(sorted(v for v in graph.vertices if v != EXTERNAL_VERTEX)):
        zone_of_bus[i + 1] = z
    zone_of_bus[22] = "EXT"

    buses = []
    gens = []
    loads = []
    total_load = 0.0
    total_gen = 0.0
    for bus_id in range(1, 23):
        is_x = bus_id == 22
        p_load = float(rng.uniform(25.0, 55.0))
        p_gen = float(rng.uniform(20.0, 55.0))
        buses.append(
            Bus(
                id=bus_id, zone=zone_of_bus[bus_id],
                kind=SLACK if is_x else (PV if bus_id % 2 == 1 else PQ),
                base_kv=345.0, v_mag=1.0 if not is_x else 1.02,
            )
        )
        if not is_x:
            loads.append(Load(bus=bus_id, p_load=p_load, q_load=0.2 * p_load,
                              sheddable_fraction=0.5))
            total_load += p_load
            gens.append(Generator(bus=bus_id, p_gen=p_gen, p_min=0.0,
                                  p_max=p_gen + 90.0, q_min=-60.0, q_max=60.0))
            total_gen += p_gen

    x_load = 30.0
    loads.append(Load(bus=22, p_load=x_load, q_load=6.0, sheddable_fraction=0.5))
    # the external grid carries the residual so the intact system balances
    x_gen = total_load + x_load - total_gen + 5.0
    gens.append(Generator(bus=22, p_gen=x_gen, p_min=0.0, p_max=x_gen + 400.0,
                          q_min=-300.0, q_max=300.0))

    bus_of_zone = {z: b for b, z in zone_of_bus.items()}
    bus_of_zone[EXTERNAL_VERTEX] = 22
    branches = []
    for i, j, w in graph.edges:
        x = float(np.clip(0.18 / w, 0.01, 0.25))
        branches.append(
            Branch(
                from_bus=bus_of_zone[graph.vertices[i]],
                to_bus=bus_of_zone[graph.vertices[j]],
                r=0.1 * x, x=x, b_shunt=0.02, rating_mva=250.0,
            )
        )

    return NetworkCase(
        base_mva=100.0,
        buses=tuple(buses),
        branches=tuple(branches),
        generators=tuple(gens),
        loads=tuple(loads),
        zone_names={z: z for z in zone_of_bus.values()},
        external_zones=frozenset({"EXT"}),
    )


def deficit_case() -> NetworkCase:
    """Three-zone triangle where zone C cannot cover its own load.

    At r = 3 the C island must shed; A and B balance on redispatch alone.
    """
    buses = (
        Bus(id=1, zone="A", kind=SLACK, base_kv=230.0, v_mag=1.02),
        Bus(id=2, zone="A", kind=PQ, base_kv=230.0),
        Bus(id=3, zone="B", kind=PV, base_kv=230.0, v_mag=1.01),
        Bus(id=4, zone="B", kind=PQ, base_kv=230.0),
        Bus(id=5, zone="C", kind=PV, base_kv=230.0, v_mag=1.01),
        Bus(id=6, zone="C", kind=PQ, base_kv=230.0),
    )
    branches = (
        Branch(from_bus=1, to_bus=2, r=0.008, x=0.04, b_shunt=0.01, rating_mva=200.0),
        Branch(from_bus=3, to_bus=4, r=0.008, x=0.04, b_shunt=0.01, rating_mva=200.0),
        Branch(from_bus=5, to_bus=6, r=0.008, x=0.04, b_shunt=0.01, rating_mva=200.0),
        Branch(from_bus=2, to_bus=3, r=0.02, x=0.09, b_shunt=0.015, rating_mva=150.0),
        Branch(from_bus=4, to_bus=5, r=0.02, x=0.09, b_shunt=0.015, rating_mva=150.0),
        Branch(from_bus=6, to_bus=1, r=0.02, x=0.09, b_shunt=0.015, rating_mva=150.0),
    )
    gens = (
        Generator(bus=1, p_gen=90.0, p_min=0.0, p_max=220.0, q_min=-120.0, q_max=120.0),
        Generator(bus=3, p_gen=80.0, p_min=0.0, p_max=180.0, q_min=-90.0, q_max=90.0),
        Generator(bus=5, p_gen=70.0, p_min=0.0, p_max=110.0, q_min=-90.0, q_max=90.0),
    )
    loads = (
        Load(bus=2, p_load=70.0, q_load=14.0, sheddable_fraction=0.3),
        Load(bus=4, p_load=50.0, q_load=10.0, sheddable_fraction=0.3),
        Load(bus=5, p_load=40.0, q_load=8.0, sheddable_fraction=1.0),
        Load(bus=6, p_load=80.0, q_load=16.0, sheddable_fraction=1.0),
    )
    return NetworkCase(
        base_mva=100.0, buses=buses, branches=branches,
        generators=gens, loads=loads,
        zone_names={"A": "A", "B": "B", "C": "C"},
    )
