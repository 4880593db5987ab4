"""Case ingestion, validation, serialization, tie-line identification."""

import json

import pytest

import gridsplit as gs
from gridsplit.errors import ValidationError
from gridsplit.network import Branch, Bus, Generator, Load, NetworkCase, case_to_dict


def minimal_case_doc():
    return {
        "schema": "gridsplit-case/1",
        "base_mva": 100.0,
        "buses": [
            {"id": 1, "zone": "A", "kind": "slack", "base_kv": 138.0,
             "v_mag": 1.0, "v_ang": 0.0, "v_min": 0.9, "v_max": 1.1},
            {"id": 2, "zone": "A", "kind": "PQ", "base_kv": 138.0,
             "v_mag": 1.0, "v_ang": 0.0, "v_min": 0.9, "v_max": 1.1},
        ],
        "branches": [
            {"from_bus": 1, "to_bus": 2, "r": 0.01, "x": 0.05, "b_shunt": 0.0,
             "tap": 1.0, "rating_mva": 100.0, "is_hvdc": False, "in_service": True,
             "hvdc_p_mw": 0.0},
        ],
        "generators": [], "loads": [], "shunts": [],
        "zones": {"A": "A"}, "external_zones": [],
    }


def test_parse_minimal_json_case(tmp_path):
    path = tmp_path / "mini.json"
    path.write_text(json.dumps(minimal_case_doc()))
    case = gs.parse_case(path)
    assert len(case.buses) == 2
    assert len(case.branches) == 1
    assert case.buses[0].kind == "slack"


def test_json_round_trip(tmp_path, planted_network):
    path = tmp_path / "case.json"
    gs.save_case(planted_network, path)
    again = gs.parse_case(path)
    assert again == planted_network
    # a second trip is also stable
    path2 = tmp_path / "case2.json"
    gs.save_case(again, path2)
    assert path.read_text() == path2.read_text()


def test_dangling_branch_endpoint_is_named():
    doc = minimal_case_doc()
    doc["branches"].append({"from_bus": 1, "to_bus": 99, "x": 0.1})
    with pytest.raises(ValidationError) as err:
        gs.case_from_dict(doc)
    assert any("99" in f for f in err.value.findings)


def test_validation_findings_are_specific():
    case = NetworkCase(
        base_mva=100.0,
        buses=(Bus(id=1, zone="A", v_min=1.2, v_max=0.9),),
        branches=(Branch(from_bus=1, to_bus=1, x=0.0),),
        generators=(Generator(bus=1, p_gen=50.0, p_min=0.0, p_max=20.0),),
        loads=(Load(bus=1, p_load=-5.0),),
    )
    findings = gs.validate_case(case)
    texts = "\n".join(findings)
    assert "v_min" in texts
    assert "from_bus equals to_bus" in texts
    assert "zero reactance" in texts
    assert "outside" in texts        # generator p_gen outside limits
    assert "negative p_load" in texts


def test_parse_case_validation_is_total(tmp_path, planted_network):
    # whatever parse_case returns passes validate with zero findings
    path = tmp_path / "ok.json"
    gs.save_case(planted_network, path)
    case = gs.parse_case(path)
    assert gs.validate_case(case) == []


def test_unsupported_format_tag(tmp_path):
    path = tmp_path / "case.xyz"
    path.write_text("junk")
    with pytest.raises(ValidationError, match="unsupported case format"):
        gs.parse_case(path)
    with pytest.raises(ValidationError, match="not found"):
        gs.parse_case(tmp_path / "absent.json")


def test_matpower_ieee14_counts(ieee14):
    assert len(ieee14.buses) == 14
    assert len(ieee14.branches) == 20
    assert len(ieee14.generators) == 5
    assert sorted(ieee14.zones) == ["Z1", "Z2", "Z3"]
    # loads lifted from the bus table: 11 buses carry load
    assert len(ieee14.loads) == 11
    assert ieee14.total_load_mw() == pytest.approx(259.0)
    # the bus-9 shunt (19 MVAr at 1.0 pu) must survive
    assert len(ieee14.shunts) == 1 and ieee14.shunts[0].bus == 9


def test_matpower_pv_setpoints_come_from_gen_table(ieee14):
    # gen at bus 8 regulates 1.09; the bus row itself says 1.09 too
    bus8 = ieee14.bus_by_id(8)
    assert bus8.kind == "PV"
    assert bus8.v_mag == pytest.approx(1.09)
    assert ieee14.bus_by_id(1).kind == "slack"


def test_matpower_warns_on_unknown_tables(tmp_path):
    text = (
        "function mpc = tiny\n"
        "mpc.baseMVA = 100;\n"
        "mpc.bus = [\n1 3 0 0 0 0 1 1.0 0 138 1 1.1 0.9;\n2 1 10 2 0 0 1 1.0 0 138 1 1.1 0.9;\n];\n"
        "mpc.gen = [\n1 10 0 50 -50 1.0 100 1 100 0;\n];\n"
        "mpc.branch = [\n1 2 0.01 0.05 0.02 100 0 0 0 0 1 -360 360;\n];\n"
        "mpc.gencost = [\n2 0 0 3 0.01 40 0;\n];\n"
    )
    path = tmp_path / "tiny.m"
    path.write_text(text)
    with pytest.warns(UserWarning, match="gencost"):
        case = gs.parse_case(path)
    assert len(case.buses) == 2


def test_zone_sidecar_overrides_case_areas(data_dir, ieee14):
    # without the sidecar all IEEE-14 buses sit in MATPOWER area "1"
    bare = gs.parse_case(data_dir / "case14.m")
    assert set(bare.zones) == {"1"}
    assert set(ieee14.zones) == {"Z1", "Z2", "Z3"}
    with pytest.raises(ValidationError, match="undefined buses"):
        gs.apply_zone_map(bare, {999: "Z9"})


def test_tie_lines_toy(two_zone):
    assert gs.tie_lines(two_zone, "A", "B") == (0,)
    with pytest.raises(ValidationError, match="unknown zone"):
        gs.tie_lines(two_zone, "A", "nope")


def test_tie_lines_disconnected_zones_empty(ieee14):
    # Z1 = buses 1-5, Z3 = buses 10-14: no direct branch joins them
    assert gs.tie_lines(ieee14, "Z1", "Z3") == ()


def test_tie_lines_ieee14_matches_brute_force(ieee14):
    # oracle: direct scan over the branch table
    zone_of = {b.id: b.zone for b in ieee14.buses}
    for za, zb in [("Z1", "Z2"), ("Z2", "Z3"), ("Z1", "Z3")]:
        expected = tuple(
            i for i, br in enumerate(ieee14.branches)
            if br.in_service and {zone_of[br.from_bus], zone_of[br.to_bus]} == {za, zb}
        )
        assert gs.tie_lines(ieee14, za, zb) == expected
    # the Z1-Z2 boundary is the three transformers 4-7, 4-9, 5-6
    z12 = gs.tie_lines(ieee14, "Z1", "Z2")
    ends = {(ieee14.branches[i].from_bus, ieee14.branches[i].to_bus) for i in z12}
    assert ends == {(4, 7), (4, 9), (5, 6)}


def test_every_branch_intra_or_in_exactly_one_tie_set(ieee14):
    zones = sorted(set(ieee14.zones))
    zone_of = {b.id: b.zone for b in ieee14.buses}
    for i, br in enumerate(ieee14.branches):
        if not br.in_service:
            continue
        hits = [
            (za, zb)
            for a, za in enumerate(zones)
            for zb in zones[a + 1:]
            if i in gs.tie_lines(ieee14, za, zb)
        ]
        if zone_of[br.from_bus] == zone_of[br.to_bus]:
            assert hits == []
        else:
            assert len(hits) == 1


def test_hvdc_branch_round_trips_and_is_flagged(tmp_path):
    doc = minimal_case_doc()
    doc["branches"].append(
        {"from_bus": 1, "to_bus": 2, "x": 0.0, "is_hvdc": True, "hvdc_p_mw": 120.0}
    )
    case = gs.case_from_dict(doc)
    assert case.branches[1].is_hvdc and case.branches[1].hvdc_p_mw == 120.0
    assert gs.tie_lines(case, "A", "A") == ()
    again = gs.case_from_dict(case_to_dict(case))
    assert again == case
