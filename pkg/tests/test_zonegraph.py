"""Zone graph aggregation: weights, HVDC exclusion, external collapse."""

import pytest

import gridsplit as gs
from gridsplit.errors import ValidationError
from gridsplit.network import Branch, Bus, NetworkCase
from gridsplit.zonegraph import (
    WEIGHT_FLOOR_MVA,
    ZoneGraph,
    build_zone_graph,
    graph_from_dict,
    total_edge_weight,
    weighted_degree,
)


def two_zone_graph_case(branches):
    buses = (
        Bus(id=1, zone="A", kind="slack"),
        Bus(id=2, zone="B", kind="PQ"),
    )
    return NetworkCase(base_mva=100.0, buses=buses, branches=tuple(branches))


def test_single_tie_345_magnitude():
    case = two_zone_graph_case([Branch(from_bus=1, to_bus=2, x=0.1)])
    flows = ({0: complex(300.0, 400.0)}, {0: complex(-290.0, -390.0)})
    g = build_zone_graph(case, flows)
    assert g.vertices == ("A", "B")
    assert g.edges == ((0, 1, 500.0),)


def test_hvdc_excluded_from_weights():
    case = two_zone_graph_case([
        Branch(from_bus=1, to_bus=2, x=0.1),
        Branch(from_bus=1, to_bus=2, x=0.2),
        Branch(from_bus=1, to_bus=2, is_hvdc=True, hvdc_p_mw=400.0),
    ])
    flows = ({0: 100 + 0j, 1: 250 + 0j}, {0: -100 + 0j, 1: -250 + 0j})
    g = build_zone_graph(case, flows)
    assert g.edges == ((0, 1, 350.0),)


def test_out_of_service_branch_contributes_nothing():
    case = two_zone_graph_case([
        Branch(from_bus=1, to_bus=2, x=0.1),
        Branch(from_bus=1, to_bus=2, x=0.1, in_service=False),
    ])
    g = build_zone_graph(case, ({0: 120 + 0j}, {0: -119 + 0j}))
    assert g.edges == ((0, 1, 120.0),)


def test_losses_use_larger_end():
    case = two_zone_graph_case([Branch(from_bus=1, to_bus=2, x=0.1)])
    g = build_zone_graph(case, ({0: 100 + 0j}, {0: -104 + 0j}))
    assert g.edges == ((0, 1, 104.0),)


def test_zero_flow_tie_keeps_floored_edge():
    case = two_zone_graph_case([Branch(from_bus=1, to_bus=2, x=0.1)])
    g = build_zone_graph(case, ({0: 0j}, {0: 0j}))
    assert g.edges == ((0, 1, WEIGHT_FLOOR_MVA),)


def test_missing_flow_rejected():
    case = two_zone_graph_case([Branch(from_bus=1, to_bus=2, x=0.1)])
    with pytest.raises(ValidationError, match="missing flow"):
        build_zone_graph(case, ({}, {}))


def test_external_zones_collapse_or_drop():
    buses = (
        Bus(id=1, zone="A", kind="slack"),
        Bus(id=2, zone="B"),
        Bus(id=3, zone="E1"),
        Bus(id=4, zone="E2"),
    )
    branches = (
        Branch(from_bus=1, to_bus=2, x=0.1),     # study tie
        Branch(from_bus=1, to_bus=3, x=0.1),     # A - external1
        Branch(from_bus=2, to_bus=4, x=0.1),     # B - external2
        Branch(from_bus=3, to_bus=4, x=0.1),     # inside the external blob
    )
    case = NetworkCase(base_mva=100.0, buses=buses, branches=branches,
                       external_zones=frozenset({"E1", "E2"}))
    flows = ({i: complex(10.0 * (i + 1)) for i in range(4)},
             {i: -complex(10.0 * (i + 1)) for i in range(4)})

    g = build_zone_graph(case, flows, include_external=True)
    assert g.vertices == ("A", "B", "X")
    assert dict(((a, b), w) for a, b, w in g.edges) == {
        (0, 1): 10.0, (0, 2): 20.0, (1, 2): 30.0,
    }

    # dropping X never changes the study-zone weights
    g2 = build_zone_graph(case, flows, include_external=False)
    assert g2.vertices == ("A", "B")
    assert g2.edges == ((0, 1, 10.0),)


def test_empty_study_footprint_rejected():
    case = NetworkCase(
        base_mva=100.0,
        buses=(Bus(id=1, zone="E"), Bus(id=2, zone="E")),
        branches=(Branch(from_bus=1, to_bus=2, x=0.1),),
        external_zones=frozenset({"E"}),
    )
    with pytest.raises(ValidationError, match="empty study footprint"):
        build_zone_graph(case, ({0: 1 + 0j}, {0: -1 + 0j}))


def test_weighted_degree():
    g = ZoneGraph(vertices=("c", "s1", "s2", "s3"),
                  edges=((0, 1, 1.0), (0, 2, 2.0), (0, 3, 3.0)))
    assert weighted_degree(g, "c") == 6.0
    assert weighted_degree(g, "s1") == 1.0
    triangle = ZoneGraph(vertices=("a", "b", "c"),
                         edges=((0, 1, 10.0), (0, 2, 1.0), (1, 2, 1.0)))
    assert weighted_degree(triangle, "a") == 11.0
    with pytest.raises(ValidationError, match="unknown vertex"):
        weighted_degree(g, "zz")


def test_isolated_vertex_has_zero_degree():
    g = ZoneGraph(vertices=("a", "b", "c"), edges=((0, 1, 5.0),))
    assert weighted_degree(g, "c") == 0.0


def test_degree_sum_is_twice_edge_weight(planted):
    g, _ = planted
    total = sum(weighted_degree(g, v) for v in g.vertices)
    assert total == pytest.approx(2.0 * total_edge_weight(g), rel=1e-12)


def test_zone_relabeling_is_equivariant():
    case = two_zone_graph_case([Branch(from_bus=1, to_bus=2, x=0.1)])
    flows = ({0: 42 + 0j}, {0: -42 + 0j})
    g = build_zone_graph(case, flows)
    renamed = NetworkCase(
        base_mva=case.base_mva,
        buses=tuple(
            Bus(id=b.id, zone={"A": "P", "B": "Q"}[b.zone], kind=b.kind) for b in case.buses
        ),
        branches=case.branches,
    )
    g2 = build_zone_graph(renamed, flows)
    assert g2.vertices == ("P", "Q")
    assert [w for _, _, w in g2.edges] == [w for _, _, w in g.edges]


def test_ieee118_weights_match_brute_force(ieee118, ieee118_solution):
    flows = gs.branch_flows(ieee118_solution, ieee118)
    g = build_zone_graph(ieee118, flows)
    # oracle: per-branch summation straight off the branch list
    zone_of = {b.id: b.zone for b in ieee118.buses}
    expected: dict[tuple[str, str], float] = {}
    for i, br in enumerate(ieee118.branches):
        if not br.in_service or br.is_hvdc:
            continue
        za, zb = sorted((zone_of[br.from_bus], zone_of[br.to_bus]))
        if za == zb:
            continue
        w = max(abs(flows[0][i]), abs(flows[1][i]))
        expected[(za, zb)] = expected.get((za, zb), 0.0) + w
    got = {
        tuple(sorted((g.vertices[a], g.vertices[b]))): w for a, b, w in g.edges
    }
    assert set(got) == set(expected)
    for key, w in expected.items():
        assert got[key] == pytest.approx(w, abs=1e-9)


def test_graph_json_round_trip_and_dot(planted):
    g, _ = planted
    doc = g.to_dict()
    assert doc["schema"] == "gridsplit-graph/1"
    assert graph_from_dict(doc) == g
    dot = g.to_dot()
    assert dot.startswith("graph zones {")
    assert dot.count("--") == len(g.edges)
    assert "penwidth" in dot
