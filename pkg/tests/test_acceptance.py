"""Acceptance gate: every criterion as a timed test with a pass/fail line.

Run with `pytest tests/test_acceptance.py -s` to see one line per criterion.
"""

import json
import math
import threading
import time
import urllib.request
from dataclasses import replace

import numpy as np
import pytest

import gridsplit as gs
from gridsplit import synth
from gridsplit.cli import main
from gridsplit.clustering import check_partition_connected, constrained_ward_cluster, cut
from gridsplit.islanding import build_plan, evaluate, redispatch_and_shed
from gridsplit.pipeline import Pipeline, RunConfig
from gridsplit.powerflow import (
    PowerFlowOptions,
    build_ybus,
    mismatch_jacobian,
    power_mismatch,
    solve,
)
from gridsplit.service import make_server
from gridsplit.spectral import eig_sym, laplacians, spectral_report
from gridsplit.zonegraph import ZoneGraph, build_zone_graph

from test_clustering import complete_graph, unconstrained_ward_oracle
from test_islanding import components_oracle, pipeline_for
from test_powerflow import analytic_two_bus, two_bus_case
from test_spectral import random_connected_graph


def announce(name: str, started: float, budget: float | None = None):
    elapsed = time.perf_counter() - started
    print(f"ACCEPTANCE {name}: PASS ({elapsed:.2f}s)")
    if budget is not None:
        assert elapsed < budget, f"{name} exceeded its {budget}s budget: {elapsed:.2f}s"


def test_laplacian_suite():
    started = time.perf_counter()
    rng = np.random.default_rng(123)
    for _ in range(50):
        n = int(rng.integers(3, 31))
        g = random_connected_graph(rng, n)
        _, _, lap, lap_n = laplacians(g)
        assert np.max(np.abs(lap.sum(axis=1))) < 1e-10
        w, _ = eig_sym(lap_n)
        assert w[0] >= -1e-9                       # PSD
        assert w[-1] <= 2.0 + 1e-9
    # zero-eigenvalue multiplicity equals component count
    for n_comp, sizes in ((2, (4, 5)), (3, (3, 4, 5))):
        vertices, edges, base = [], [], 0
        for size in sizes:
            vertices += [f"c{base + i}" for i in range(size)]
            edges += [(base + i, base + (i + 1) % size, 1.0) for i in range(size)]
            base += size
        g = ZoneGraph(
            vertices=tuple(vertices),
            edges=tuple((min(a, b), max(a, b), w) for a, b, w in edges),
        )
        _, _, _, lap_n = laplacians(g)
        w, _ = eig_sym(lap_n)
        assert int(np.sum(np.abs(w) < 1e-9)) == n_comp
    announce("laplacian-suite", started, budget=5.0)


def test_eigensolver_oracle():
    started = time.perf_counter()
    rng = np.random.default_rng(456)
    for _ in range(100):
        m = rng.uniform(-1.0, 1.0, size=(20, 20))
        m = (m + m.T) / 2.0
        w, v = eig_sym(m)
        assert np.linalg.norm(m - v @ np.diag(w) @ v.T) < 1e-8
        assert np.linalg.norm(v.T @ v - np.eye(20)) < 1e-8
    announce("eigensolver-oracle", started, budget=10.0)


def test_planted_partition_recovery():
    started = time.perf_counter()
    g, truth = synth.planted_zone_graph()
    report = spectral_report(g)
    assert report.chosen_k == 3
    d = constrained_ward_cluster(report.embedding, g)
    assert cut(d, 3).assignment == truth.assignment
    announce("planted-partition-recovery", started, budget=1.0)


def test_connectivity_constraint_every_fixture_every_r():
    started = time.perf_counter()
    graphs = [synth.planted_zone_graph()[0]]
    for case in (synth.planted_case(), synth.deficit_case(), synth.two_zone_case()):
        graphs.append(pipeline_for(case)[0])
    rng = np.random.default_rng(789)
    graphs += [random_connected_graph(rng, int(rng.integers(4, 16))) for _ in range(5)]
    for g in graphs:
        d = constrained_ward_cluster(spectral_report(g).embedding, g)
        for r in range(1, g.order + 1):
            assert check_partition_connected(g, cut(d, r)) == []
    announce("connectivity-constraint", started)


def test_ward_oracle_complete_graphs():
    started = time.perf_counter()
    rng = np.random.default_rng(1357)
    for n in range(3, 9):
        x = rng.normal(size=(n, min(n, 4)))
        d = constrained_ward_cluster(x, complete_graph(n))
        expected = unconstrained_ward_oracle(x)
        got = [(m.cluster_a, m.cluster_b, m.new_cluster_id) for m in d.merges]
        assert got == [(a, b, nid) for a, b, _, nid in expected]
        for mine, (_, _, cost, _) in zip(d.merges, expected):
            assert mine.merge_cost == pytest.approx(cost, rel=1e-9)
    announce("ward-oracle", started)


def test_power_flow_references(ieee14, ieee14_reference):
    started = time.perf_counter()
    sol = solve(ieee14, options=PowerFlowOptions(tol_pu=1e-10))
    assert sol.converged
    for ref in ieee14_reference["buses"]:
        assert abs(sol.v_mag[ref["id"]] - ref["v_mag"]) < 1e-4
    announce("powerflow-ieee14-reference", started, budget=1.0)

    started = time.perf_counter()
    case = two_bus_case(p_load_mw=100.0, q_load_mvar=0.0, x=0.1)
    sol2 = solve(case)
    v2, theta = analytic_two_bus(1.0, 0.0, 0.1)
    assert abs(sol2.v_mag[2] - v2) < 1e-6
    assert abs(sol2.v_ang[2] - theta) < 1e-6
    announce("powerflow-two-bus-analytic", started, budget=1.0)

    started = time.perf_counter()
    rng = np.random.default_rng(99)
    bus_ids = tuple(b.id for b in ieee14.buses)
    ybus = build_ybus(ieee14, bus_ids)
    kinds = {b.id: b.kind for b in ieee14.buses}
    pv = np.array([i for i, b in enumerate(bus_ids) if kinds[b] == "PV"])
    pq = np.array([i for i, b in enumerate(bus_ids) if kinds[b] == "PQ"])
    pvpq = np.concatenate([pv, pq])
    vm = 1.0 + rng.uniform(-0.05, 0.05, size=len(bus_ids))
    va = rng.uniform(-0.3, 0.3, size=len(bus_ids))
    sbus = rng.uniform(-0.5, 0.5, size=len(bus_ids)) * (1 + 0.3j)
    jac = mismatch_jacobian(ybus, vm * np.exp(1j * va), pvpq, pq)
    z0 = np.concatenate([va[pvpq], vm[pq]])

    def f(z):
        va_z, vm_z = va.copy(), vm.copy()
        va_z[pvpq] = z[: len(pvpq)]
        vm_z[pq] = z[len(pvpq):]
        return power_mismatch(ybus, vm_z * np.exp(1j * va_z), sbus, pvpq, pq)

    eps = 1e-6
    for col in range(len(z0)):
        dz = np.zeros_like(z0)
        dz[col] = eps
        fd = (f(z0 + dz) - f(z0 - dz)) / (2 * eps)
        assert np.max(np.abs(fd - jac[:, col])) < 1e-6
    announce("powerflow-jacobian-fd", started, budget=1.0)


def test_p_metric_behavior():
    started = time.perf_counter()
    fixtures = [synth.planted_zone_graph()[0]]
    dendros = {}
    for case in (synth.planted_case(), synth.deficit_case()):
        fixtures.append(pipeline_for(case)[0])
    for g in fixtures:
        d = constrained_ward_cluster(spectral_report(g).embedding, g)
        values = []
        for r in range(1, g.order + 1):
            values.append(gs.p_metric(g, cut(d, r)))
        assert values[0] == 0.0
        for a, b in zip(values, values[1:]):
            assert b >= a - 1e-12                  # nondecreasing along nesting
        assert values[0] <= values[1] <= values[2]  # 1 vs 2 vs 3 clusters
    announce("p-metric-trend", started)


def test_end_to_end_ieee118_islands(data_dir):
    started = time.perf_counter()
    case = gs.parse_case(data_dir / "case118.m", zone_map=data_dir / "case118_zones.json")
    sol = gs.solve(case)
    flows = gs.branch_flows(sol, case)
    g = build_zone_graph(case, flows)
    d = constrained_ward_cluster(spectral_report(g).embedding, g)
    system_gap = case.total_generation_mw() - case.total_load_mw()
    for r in (2, 3):
        plan = build_plan(case, g, cut(d, r))
        # conservation before any action
        assert sum(i.imbalance_mw for i in plan.islands) == pytest.approx(
            system_gap, abs=1e-6
        )
        # cut set equals a brute-force recount
        zone_of = {b.id: b.zone for b in case.buses}
        part = plan.partition
        recount = tuple(
            i for i, br in enumerate(case.branches)
            if br.in_service and not br.is_hvdc
            and part.assignment[zone_of[br.from_bus]]
            != part.assignment[zone_of[br.to_bus]]
        )
        assert plan.cut_lines == recount
        comps = components_oracle(case, plan.cut_lines)
        assert comps == {frozenset(i.buses) for i in plan.islands}
        report, _ = evaluate(case, g, plan)
        for island in report.islands:
            assert island.converged
            assert island.min_voltage is not None and island.min_voltage >= 0.90
    announce("end-to-end-ieee118", started, budget=10.0)


def test_cli_service_parity_and_idempotence(tmp_path):
    started = time.perf_counter()
    case_path = tmp_path / "planted.json"
    gs.save_case(synth.planted_case(), case_path)

    outs = [tmp_path / "run1", tmp_path / "run2"]
    for out in outs:
        for args in (
            ["evaluate", "--case", str(case_path), "-r", "3", "--out", str(out)],
            ["sweep", "--case", str(case_path), "--max-islands", "9", "--out", str(out)],
            ["build-graph", "--case", str(case_path), "--out", str(out)],
            ["spectral", "--case", str(case_path), "--out", str(out)],
        ):
            assert main(args) == 0
    for name in ("plan.json", "report.json", "sweep.csv", "graph.json",
                 "graph.dot", "spectral.json", "dendrogram.json", "case_summary.json"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes(), name

    pipe = Pipeline(RunConfig(case_path=str(case_path)))
    server = make_server(pipe, port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    port = server.server_address[1]
    try:
        for path, artifact in [
            ("/plan?r=3", "plan.json"),
            ("/evaluate?r=3", "report.json"),
            ("/sweep?max=9", "sweep.csv"),
            ("/graph", "graph.json"),
            ("/spectral", "spectral.json"),
            ("/dendrogram", "dendrogram.json"),
            ("/case/summary", "case_summary.json"),
        ]:
            with urllib.request.urlopen(f"http://127.0.0.1:{port}{path}") as resp:
                body = resp.read()
            assert body == (outs[0] / artifact).read_bytes(), path
    finally:
        server.shutdown()
    announce("cli-service-parity", started)
