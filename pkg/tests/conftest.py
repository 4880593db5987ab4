import json
from pathlib import Path

import pytest

import gridsplit as gs
from gridsplit import synth

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def ieee14() -> gs.NetworkCase:
    return gs.parse_case(DATA / "case14.m", zone_map=DATA / "case14_zones.json")


@pytest.fixture(scope="session")
def ieee14_reference() -> dict:
    return json.loads((DATA / "case14_solution.json").read_text())


@pytest.fixture(scope="session")
def ieee118() -> gs.NetworkCase:
    return gs.parse_case(DATA / "case118.m", zone_map=DATA / "case118_zones.json")


@pytest.fixture(scope="session")
def ieee118_reference() -> dict:
    return json.loads((DATA / "case118_solution.json").read_text())


@pytest.fixture(scope="session")
def ieee118_solution(ieee118) -> gs.PowerFlowSolution:
    return gs.solve(ieee118)


@pytest.fixture(scope="session")
def two_zone() -> gs.NetworkCase:
    return synth.two_zone_case()


@pytest.fixture(scope="session")
def planted():
    return synth.planted_zone_graph()


@pytest.fixture(scope="session")
def planted_network() -> gs.NetworkCase:
    return synth.planted_case()


@pytest.fixture(scope="session")
def deficit() -> gs.NetworkCase:
    return synth.deficit_case()
