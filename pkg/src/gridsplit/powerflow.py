"""Steady-state AC power flow by full Newton-Raphson in polar coordinates.

Dense numpy throughout: study systems here are a few hundred buses at most,
so sparse machinery would only add noise. The mismatch and Jacobian builders
are module-level functions (not methods) so tests can probe them directly,
e.g. to compare the analytic Jacobian against finite differences.

Conventions match the usual per-unit textbook formulation:

* bus injection ``S = V * conj(Y @ V)`` equals generation minus load (p.u.);
* PV and slack buses hold ``Bus.v_mag`` as their voltage setpoint;
* branch pi-model with off-nominal tap ratio on the from side;
* HVDC branches carry a fixed MW transfer and do not enter the Y-bus.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError, ValidationError
from .network import PQ, PV, SLACK, Branch, NetworkCase

PF_SCHEMA = "gridsplit-pf/1"


@dataclass(frozen=True)
class PowerFlowOptions:
    tol_pu: float = 1e-6            # max |dP|, |dQ| in p.u.
    max_iter: int = 50
    enforce_q_limits: bool = False  # optional PV -> PQ switching
    divergence_window: int = 3      # abort after this many consecutive growths


@dataclass(frozen=True)
class PowerFlowSolution:
    bus_ids: tuple[int, ...]
    v_mag: dict[int, float]                      # p.u.
    v_ang: dict[int, float]                      # rad
    s_from: dict[int, complex]                   # branch id -> MVA
    s_to: dict[int, complex]
    slack_bus: int
    slack_p_mw: float                            # generation required at slack
    slack_q_mvar: float
    converged: bool
    iterations: int                              # mismatch evaluations
    max_mismatch_mva: float

    def complex_voltages(self) -> dict[int, complex]:
        return {b: self.v_mag[b] * np.exp(1j * self.v_ang[b]) for b in self.bus_ids}

    def to_dict(self) -> dict:
        return {
            "schema": PF_SCHEMA,
            "converged": self.converged,
            "iterations": self.iterations,
            "max_mismatch_mva": self.max_mismatch_mva,
            "slack_bus": self.slack_bus,
            "slack_p_mw": self.slack_p_mw,
            "slack_q_mvar": self.slack_q_mvar,
            "buses": [
                {"id": b, "v_mag": self.v_mag[b], "v_ang": self.v_ang[b]}
                for b in self.bus_ids
            ],
            "branches": [
                {
                    "id": i,
                    "p_from_mw": self.s_from[i].real, "q_from_mvar": self.s_from[i].imag,
                    "p_to_mw": self.s_to[i].real, "q_to_mvar": self.s_to[i].imag,
                }
                for i in sorted(self.s_from)
            ],
        }


# ---------------------------------------------------------------------------
# Building blocks
# ---------------------------------------------------------------------------

def branch_admittances(br: Branch) -> tuple[complex, complex, complex, complex]:
    """(Yff, Yft, Ytf, Ytt) of the branch pi-model with from-side tap."""
    ys = 1.0 / complex(br.r, br.x)
    bc = 1j * br.b_shunt / 2.0
    tau = br.tap
    return (ys + bc) / tau**2, -ys / tau, -ys / tau, ys + bc


def build_ybus(case: NetworkCase, bus_ids: tuple[int, ...]) -> np.ndarray:
    """Dense bus admittance matrix over ``bus_ids`` (in that order).

    Includes in-service AC branches with both endpoints in the subset and all
    in-service shunts on those buses. HVDC branches are excluded.
    """
    idx = {b: i for i, b in enumerate(bus_ids)}
    n = len(bus_ids)
    y = np.zeros((n, n), dtype=complex)
    for br in case.branches:
        if not br.in_service or br.is_hvdc:
            continue
        if br.from_bus not in idx or br.to_bus not in idx:
            continue
        f, t = idx[br.from_bus], idx[br.to_bus]
        yff, yft, ytf, ytt = branch_admittances(br)
        y[f, f] += yff
        y[f, t] += yft
        y[t, f] += ytf
        y[t, t] += ytt
    for sh in case.shunts:
        if sh.in_service and sh.bus in idx:
            y[idx[sh.bus], idx[sh.bus]] += complex(sh.g_mw, sh.b_mvar) / case.base_mva
    return y


def power_mismatch(ybus: np.ndarray, v: np.ndarray, sbus: np.ndarray,
                   pvpq: np.ndarray, pq: np.ndarray) -> np.ndarray:
    """Stacked [dP at PV+PQ; dQ at PQ] in p.u. at complex voltages ``v``."""
    ds = v * np.conj(ybus @ v) - sbus
    return np.concatenate([ds[pvpq].real, ds[pq].imag])


def mismatch_jacobian(ybus: np.ndarray, v: np.ndarray,
                      pvpq: np.ndarray, pq: np.ndarray) -> np.ndarray:
    """Analytic Jacobian of :func:`power_mismatch` w.r.t. [theta_pvpq; vm_pq]."""
    ibus = ybus @ v
    diag_v = np.diag(v)
    diag_i = np.diag(ibus)
    diag_vnorm = np.diag(v / np.abs(v))
    ds_dva = 1j * diag_v @ np.conj(diag_i - ybus @ diag_v)
    ds_dvm = diag_v @ np.conj(ybus @ diag_vnorm) + np.conj(diag_i) @ diag_vnorm
    j11 = ds_dva[np.ix_(pvpq, pvpq)].real
    j12 = ds_dvm[np.ix_(pvpq, pq)].real
    j21 = ds_dva[np.ix_(pq, pvpq)].imag
    j22 = ds_dvm[np.ix_(pq, pq)].imag
    return np.block([[j11, j12], [j21, j22]])


def _connected_components(bus_ids: tuple[int, ...], case: NetworkCase) -> list[set[int]]:
    """AC-connected components of the induced subnetwork (HVDC does not bond)."""
    members = set(bus_ids)
    adj: dict[int, set[int]] = {b: set() for b in bus_ids}
    for br in case.branches:
        if br.in_service and not br.is_hvdc and br.from_bus in members and br.to_bus in members:
            adj[br.from_bus].add(br.to_bus)
            adj[br.to_bus].add(br.from_bus)
    seen: set[int] = set()
    comps: list[set[int]] = []
    for start in bus_ids:
        if start in seen:
            continue
        comp = {start}
        frontier = [start]
        while frontier:
            nxt = frontier.pop()
            for nb in adj[nxt]:
                if nb not in comp:
                    comp.add(nb)
                    frontier.append(nb)
        seen |= comp
        comps.append(comp)
    return comps


# ---------------------------------------------------------------------------
# Solve
# ---------------------------------------------------------------------------

def solve(case: NetworkCase, subnetwork: set[int] | None = None,
          options: PowerFlowOptions | None = None) -> PowerFlowSolution:
    """Newton-Raphson power flow on the case or an induced bus subset.

    Requires an AC-connected (sub)network with exactly one slack bus backed
    by an in-service generator. Non-convergence within the iteration cap (or
    detected divergence) returns the best iterate with ``converged=False``;
    a singular Jacobian raises :class:`NumericalError`.
    """
    opts = options or PowerFlowOptions()
    if subnetwork is None:
        bus_ids = tuple(b.id for b in case.buses)
    else:
        members = set(subnetwork)
        bus_ids = tuple(b.id for b in case.buses if b.id in members)
        missing = members - set(bus_ids)
        if missing:
            raise ValidationError(f"subnetwork references undefined buses {sorted(missing)}")
    if not bus_ids:
        raise ValidationError("empty subnetwork")

    comps = _connected_components(bus_ids, case)
    if len(comps) > 1:
        sizes = sorted((len(c) for c in comps), reverse=True)
        raise ValidationError(
            f"subnetwork is not AC-connected: {len(comps)} components of sizes {sizes}"
        )

    idx = {b: i for i, b in enumerate(bus_ids)}
    n = len(bus_ids)
    buses = [case.bus_by_id(b) for b in bus_ids]

    gen_buses = {g.bus for g in case.generators if g.in_service and g.bus in idx}
    slack = [b for b in buses if b.kind == SLACK]
    if len(slack) != 1:
        raise ValidationError(
            f"need exactly one slack bus in the solved subnetwork, found {len(slack)}"
            + (f" ({[b.id for b in slack]})" if slack else "")
        )
    slack_bus = slack[0]
    if slack_bus.id not in gen_buses:
        raise ValidationError(f"slack bus {slack_bus.id} has no in-service generator")

    kinds = []
    for b in buses:
        kind = b.kind
        if kind == PV and b.id not in gen_buses:
            warnings.warn(f"PV bus {b.id} has no in-service generator; treating as PQ",
                          stacklevel=2)
            kind = PQ
        kinds.append(kind)

    ybus = build_ybus(case, bus_ids)
    sbus = _scheduled_injections(case, bus_ids, idx)

    vm = np.array([b.v_mag if k in (PV, SLACK) else 1.0 for b, k in zip(buses, kinds)])
    va = np.zeros(n)
    va[idx[slack_bus.id]] = slack_bus.v_ang

    pv = np.array([i for i, k in enumerate(kinds) if k == PV], dtype=int)
    pq = np.array([i for i, k in enumerate(kinds) if k == PQ], dtype=int)
    q_limited: dict[int, float] = {}    # bus position -> pinned Q injection (p.u.)

    for _ in range(10):                 # PV/PQ switching rounds
        vm, va, converged, iterations, worst = _newton(
            ybus, sbus, vm, va, pv, pq, idx[slack_bus.id], opts
        )
        if not opts.enforce_q_limits or not converged:
            break
        switched = _q_limit_violations(case, bus_ids, ybus, vm, va, pv, q_limited)
        if not switched:
            break
        for pos, q_pin in switched.items():
            q_limited[pos] = q_pin
            sbus[pos] = sbus[pos].real + 1j * q_pin
        pv = np.array([p for p in pv if p not in q_limited], dtype=int)
        pq = np.array(sorted(set(pq) | set(q_limited)), dtype=int)

    v = vm * np.exp(1j * va)
    s_inj = v * np.conj(ybus @ v)
    s_load = np.zeros(n, dtype=complex)
    for l in case.loads:
        if l.bus in idx:
            s_load[idx[l.bus]] += complex(l.p_load, l.q_load) / case.base_mva
    s_slack = (s_inj[idx[slack_bus.id]] + s_load[idx[slack_bus.id]]) * case.base_mva

    flows_from, flows_to = _all_branch_flows(case, bus_ids, v)
    return PowerFlowSolution(
        bus_ids=bus_ids,
        v_mag={b: float(vm[idx[b]]) for b in bus_ids},
        v_ang={b: float(va[idx[b]]) for b in bus_ids},
        s_from=flows_from,
        s_to=flows_to,
        slack_bus=slack_bus.id,
        slack_p_mw=float(s_slack.real),
        slack_q_mvar=float(s_slack.imag),
        converged=converged,
        iterations=iterations,
        max_mismatch_mva=float(worst * case.base_mva),
    )


def _scheduled_injections(case: NetworkCase, bus_ids, idx) -> np.ndarray:
    sbus = np.zeros(len(bus_ids), dtype=complex)
    for g in case.generators:
        if g.in_service and g.bus in idx:
            sbus[idx[g.bus]] += complex(g.p_gen, g.q_gen) / case.base_mva
    for l in case.loads:
        if l.bus in idx:
            sbus[idx[l.bus]] -= complex(l.p_load, l.q_load) / case.base_mva
    for br in case.branches:
        if br.in_service and br.is_hvdc and br.from_bus in idx and br.to_bus in idx:
            sbus[idx[br.from_bus]] -= br.hvdc_p_mw / case.base_mva
            sbus[idx[br.to_bus]] += br.hvdc_p_mw / case.base_mva
    return sbus


def _newton(ybus, sbus, vm0, va0, pv, pq, slack_pos, opts):
    """Core NR loop. Returns (vm, va, converged, evaluations, best worst-mismatch)."""
    vm, va = vm0.copy(), va0.copy()
    pvpq = np.concatenate([pv, pq]).astype(int)
    best = (np.inf, vm.copy(), va.copy())
    growths = 0
    prev = np.inf
    evaluations = 0
    for it in range(opts.max_iter + 1):
        v = vm * np.exp(1j * va)
        f = power_mismatch(ybus, v, sbus, pvpq, pq)
        evaluations += 1
        worst = float(np.max(np.abs(f))) if f.size else 0.0
        if worst < best[0]:
            best = (worst, vm.copy(), va.copy())
        if worst < opts.tol_pu:
            return vm, va, True, evaluations, worst
        growths = growths + 1 if worst > prev else 0
        if growths >= opts.divergence_window:
            break
        prev = worst
        if it == opts.max_iter:
            break
        jac = mismatch_jacobian(ybus, v, pvpq, pq)
        try:
            dx = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(
                f"singular power-flow Jacobian at iteration {it + 1}",
                residual=worst, iteration=it + 1,
            ) from exc
        va[pvpq] += dx[: len(pvpq)]
        vm[pq] += dx[len(pvpq):]
    worst, vm, va = best
    return vm, va, False, evaluations, worst


def _q_limit_violations(case, bus_ids, ybus, vm, va, pv, already) -> dict[int, float]:
    """PV buses whose aggregate generator Q range is violated.

    Returns {bus position: pinned Q injection (p.u.)} for newly violated
    buses; the pin is the violated limit minus the local reactive load.
    """
    idx = {b: i for i, b in enumerate(bus_ids)}
    v = vm * np.exp(1j * va)
    s_inj = v * np.conj(ybus @ v)
    q_load = np.zeros(len(bus_ids))
    for l in case.loads:
        if l.bus in idx:
            q_load[idx[l.bus]] += l.q_load / case.base_mva
    limits: dict[int, tuple[float, float]] = {}
    for g in case.generators:
        if g.in_service and g.bus in idx:
            lo, hi = limits.get(idx[g.bus], (0.0, 0.0))
            limits[idx[g.bus]] = (lo + g.q_min / case.base_mva, hi + g.q_max / case.base_mva)
    out: dict[int, float] = {}
    for pos in pv:
        if pos in already or pos not in limits:
            continue
        q_gen = s_inj[pos].imag + q_load[pos]
        lo, hi = limits[pos]
        if q_gen < lo - 1e-9:
            out[pos] = lo - q_load[pos]
        elif q_gen > hi + 1e-9:
            out[pos] = hi - q_load[pos]
    return out


# ---------------------------------------------------------------------------
# Branch flows
# ---------------------------------------------------------------------------

def _all_branch_flows(case: NetworkCase, bus_ids: tuple[int, ...],
                      v: np.ndarray) -> tuple[dict[int, complex], dict[int, complex]]:
    idx = {b: i for i, b in enumerate(bus_ids)}
    s_from: dict[int, complex] = {}
    s_to: dict[int, complex] = {}
    base = case.base_mva
    for i, br in enumerate(case.branches):
        if not br.in_service or br.from_bus not in idx or br.to_bus not in idx:
            continue
        if br.is_hvdc:
            s_from[i] = complex(br.hvdc_p_mw, 0.0)
            s_to[i] = complex(-br.hvdc_p_mw, 0.0)
            continue
        vf, vt = v[idx[br.from_bus]], v[idx[br.to_bus]]
        yff, yft, ytf, ytt = branch_admittances(br)
        s_from[i] = complex(vf * np.conj(yff * vf + yft * vt)) * base
        s_to[i] = complex(vt * np.conj(ytf * vf + ytt * vt)) * base
    return s_from, s_to


def branch_flows(solution: PowerFlowSolution,
                 case: NetworkCase) -> tuple[dict[int, complex], dict[int, complex]]:
    """Recompute per-branch (S_from, S_to) in MVA from the solution voltages.

    Rejects unconverged solutions: flows from a non-solution are meaningless
    for downstream weighting.
    """
    if not solution.converged:
        raise ValidationError("branch_flows requires a converged power-flow solution")
    v = np.array([solution.v_mag[b] * np.exp(1j * solution.v_ang[b])
                  for b in solution.bus_ids])
    return _all_branch_flows(case, solution.bus_ids, v)


def setpoint_flows(case: NetworkCase) -> tuple[dict[int, complex], dict[int, complex]]:
    """Branch flows implied by the voltages stored on the case buses.

    For pre-solved cases this avoids re-running the solver before building
    the zone graph.
    """
    bus_ids = tuple(b.id for b in case.buses)
    v = np.array([b.v_mag * np.exp(1j * b.v_ang) for b in case.buses])
    return _all_branch_flows(case, bus_ids, v)


def power_balance(solution: PowerFlowSolution, case: NetworkCase) -> dict[str, float]:
    """System totals in MW for a solved (sub)network: generation (with the
    slack picking up its residual), load, series losses, and shunt draw.
    Generation - load - losses - shunt is the balance residual.
    """
    members = set(solution.bus_ids)
    gen = sum(g.p_gen for g in case.generators
              if g.in_service and g.bus in members and g.bus != solution.slack_bus)
    gen += solution.slack_p_mw
    load = sum(l.p_load for l in case.loads if l.bus in members)
    losses = sum((solution.s_from[i] + solution.s_to[i]).real for i in solution.s_from)
    shunt = 0.0
    for sh in case.shunts:
        if sh.in_service and sh.bus in members:
            shunt += sh.g_mw * solution.v_mag[sh.bus] ** 2
    return {
        "generation_mw": gen,
        "load_mw": load,
        "loss_mw": losses,
        "shunt_mw": shunt,
        "residual_mw": gen - load - losses - shunt,
    }


def angles_deg(solution: PowerFlowSolution) -> dict[int, float]:
    return {b: math.degrees(a) for b, a in solution.v_ang.items()}
