"""Turn a zone partition into an evaluated islanding plan.

The pipeline stage that makes the clustering actionable: identify the tie
branches to switch, compute the flow-disruption ratio p, balance every
island by redispatch (and load shedding only when capacity runs out), then
screen each island with its own AC power flow.

The p metric is always computed on the pre-action flows: it measures how
much of the operating point the split disrupts, and redispatch deliberately
changes that operating point.
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass, field, replace

from .clustering import Dendrogram, Partition, cut
from .errors import NumericalError, ValidationError
from .network import PQ, SLACK, Generator, Load, NetworkCase
from .powerflow import PowerFlowOptions, PowerFlowSolution, solve
from .zonegraph import EXTERNAL_VERTEX, ZoneGraph

PLAN_SCHEMA = "gridsplit-plan/1"
REPORT_SCHEMA = "gridsplit-report/1"


@dataclass(frozen=True)
class IslandSpec:
    label: int
    vertices: tuple[str, ...]          # zone-graph vertices (may include X)
    zones: tuple[str, ...]             # actual zone ids (X expanded)
    buses: tuple[int, ...]
    gen_mw: float                      # pre-action in-service generation
    load_mw: float
    imbalance_mw: float                # gen - load before any action


@dataclass(frozen=True)
class IslandingPlan:
    partition: Partition
    islands: tuple[IslandSpec, ...]
    cut_lines: tuple[int, ...]         # branch ids to disconnect (AC ties)
    ei_attached: int | None            # island label holding vertex X

    def to_dict(self) -> dict:
        return {
            "schema": PLAN_SCHEMA,
            "r": self.partition.r,
            "assignment": dict(sorted(self.partition.assignment.items())),
            "islands": [
                {
                    "label": i.label,
                    "vertices": list(i.vertices),
                    "zones": list(i.zones),
                    "buses": list(i.buses),
                    "gen_mw": i.gen_mw,
                    "load_mw": i.load_mw,
                    "imbalance_mw": i.imbalance_mw,
                }
                for i in self.islands
            ],
            "cut_lines": list(self.cut_lines),
            "ei_attached": self.ei_attached,
        }


@dataclass(frozen=True)
class RedispatchRecord:
    label: int
    redispatch_mw: float               # signed: negative means curtailment
    shed_mw: float
    feasible: bool
    note: str = ""


@dataclass(frozen=True)
class IslandResult:
    label: int
    zones: tuple[str, ...]
    redispatch_mw: float
    shed_mw: float
    converged: bool
    min_voltage: float | None          # reported only when converged
    overload_count: int
    unscreened_branches: int
    slack_bus: int | None
    slack_residual_mw: float | None
    viable: bool
    note: str = ""


@dataclass(frozen=True)
class IslandReport:
    r: int
    p: float
    switching_count: int
    cut_lines: tuple[int, ...]
    islands: tuple[IslandResult, ...]

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "r": self.r,
            "p": self.p,
            "switching_count": self.switching_count,
            "cut_lines": list(self.cut_lines),
            "islands": [
                {
                    "label": i.label,
                    "zones": list(i.zones),
                    "redispatch_mw": i.redispatch_mw,
                    "shed_mw": i.shed_mw,
                    "converged": i.converged,
                    "min_voltage": i.min_voltage,
                    "overload_count": i.overload_count,
                    "unscreened_branches": i.unscreened_branches,
                    "slack_bus": i.slack_bus,
                    "slack_residual_mw": i.slack_residual_mw,
                    "viable": i.viable,
                    "note": i.note,
                }
                for i in self.islands
            ],
        }


@dataclass(frozen=True)
class EvaluateOptions:
    loss_margin: float = 0.03          # generation target = load * (1 + margin)
    min_voltage_pu: float = 0.90
    slack_residual_fraction: float = 0.05
    powerflow: PowerFlowOptions = field(default_factory=PowerFlowOptions)


# ---------------------------------------------------------------------------
# Plan construction and the p metric
# ---------------------------------------------------------------------------

def _vertex_of_zone(case: NetworkCase) -> dict[str, str]:
    return {
        z: (EXTERNAL_VERTEX if z in case.external_zones else z) for z in case.zones
    }


def build_plan(case: NetworkCase, g: ZoneGraph, partition: Partition) -> IslandingPlan:
    """Materialize a partition of the zone graph into buses and cut branches.

    cut_lines is exactly the set of in-service AC branches whose endpoints
    fall in different islands. HVDC links are never cut: they do not bond
    islands electrically. Buses whose zone is outside the partition (dropped
    external zones) belong to no island.
    """
    missing = [v for v in g.vertices if v not in partition.assignment]
    if missing:
        raise ValidationError(f"partition does not cover vertices {missing}")
    vertex_of = _vertex_of_zone(case)
    bus_island: dict[int, int] = {}
    for b in case.buses:
        v = vertex_of[b.zone]
        label = partition.assignment.get(v)
        if label is not None:
            bus_island[b.id] = label

    gen_mw: dict[int, float] = {}
    load_mw: dict[int, float] = {}
    for gnr in case.generators:
        if gnr.in_service and gnr.bus in bus_island:
            lbl = bus_island[gnr.bus]
            gen_mw[lbl] = gen_mw.get(lbl, 0.0) + gnr.p_gen
    for ld in case.loads:
        if ld.bus in bus_island:
            lbl = bus_island[ld.bus]
            load_mw[lbl] = load_mw.get(lbl, 0.0) + ld.p_load

    islands = []
    ei_attached = None
    for label, members in enumerate(partition.clusters(), start=1):
        zones = sorted(
            z for z in case.zones
            if vertex_of[z] in members
        )
        if EXTERNAL_VERTEX in members:
            ei_attached = label
        islands.append(
            IslandSpec(
                label=label,
                vertices=tuple(sorted(members)),
                zones=tuple(zones),
                buses=tuple(b.id for b in case.buses if bus_island.get(b.id) == label),
                gen_mw=gen_mw.get(label, 0.0),
                load_mw=load_mw.get(label, 0.0),
                imbalance_mw=gen_mw.get(label, 0.0) - load_mw.get(label, 0.0),
            )
        )

    cut_ids = tuple(
        i for i, br in enumerate(case.branches)
        if br.in_service and not br.is_hvdc
        and br.from_bus in bus_island and br.to_bus in bus_island
        and bus_island[br.from_bus] != bus_island[br.to_bus]
    )
    return IslandingPlan(
        partition=partition, islands=tuple(islands),
        cut_lines=cut_ids, ei_attached=ei_attached,
    )


def p_metric(g: ZoneGraph, partition: Partition) -> float:
    """Inter-cluster edge weight over intra-cluster edge weight.

    Small p means the partition severs little of the operating flow. With no
    intra-cluster weight the ratio is undefined and reported as infinity.
    """
    missing = [v for v in g.vertices if v not in partition.assignment]
    if missing:
        raise ValidationError(f"partition does not cover vertices {missing}")
    labels = [partition.assignment[v] for v in g.vertices]
    inter = sum(w for a, b, w in g.edges if labels[a] != labels[b])
    intra = sum(w for a, b, w in g.edges if labels[a] == labels[b])
    if intra == 0.0:
        if inter == 0.0:
            return 0.0
        warnings.warn("p metric undefined: no intra-cluster edge weight", stacklevel=2)
        return float("inf")
    return inter / intra


@dataclass(frozen=True)
class SweepRow:
    r: int
    max_imbalance_mw: float
    switching_count: int
    p: float


def sweep_metrics(case: NetworkCase, g: ZoneGraph, d: Dendrogram, r_max: int,
                  include_baseline: bool = False) -> list[SweepRow]:
    """Decision-aid table across island counts r.

    Rows cover r = 2..r_max (the interesting range); ``include_baseline``
    prepends the degenerate r = 1 row whose imbalance is the system-wide
    generation/load gap.
    """
    if r_max > d.order:
        raise ValidationError(f"r_max {r_max} exceeds vertex count {d.order}")
    rows = []
    start = 1 if include_baseline else 2
    for r in range(start, r_max + 1):
        partition = cut(d, r)
        plan = build_plan(case, g, partition)
        rows.append(
            SweepRow(
                r=r,
                max_imbalance_mw=max((abs(i.imbalance_mw) for i in plan.islands), default=0.0),
                switching_count=len(plan.cut_lines),
                p=p_metric(g, partition),
            )
        )
    return rows


def sweep_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    buf.write("r,max_imbalance_mw,switching_count,p\n")
    for row in rows:
        buf.write(f"{row.r},{row.max_imbalance_mw:.6f},{row.switching_count},{row.p:.6f}\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Redispatch and shedding
# ---------------------------------------------------------------------------

def redispatch_and_shed(case: NetworkCase, plan: IslandingPlan,
                        loss_margin: float = 0.03,
                        ) -> tuple[NetworkCase, list[RedispatchRecord]]:
    """Balance every island: generation target = island load * (1 + margin).

    Surplus islands curtail generators proportionally to their (p_gen -
    p_min) headroom; deficit islands raise them proportionally to (p_max -
    p_gen). Only if every generator is at p_max does load shedding close the
    remaining gap, spread over loads in proportion to their sheddable
    megawatts (reactive load follows pro-rata). An island whose capacity and
    sheddable load are jointly insufficient is flagged infeasible.
    """
    gens = list(case.generators)
    loads = list(case.loads)
    records: list[RedispatchRecord] = []

    for island in plan.islands:
        members = set(island.buses)
        gen_idx = [i for i, g in enumerate(gens) if g.in_service and g.bus in members]
        load_idx = [i for i, l in enumerate(loads) if l.bus in members]
        total_gen = sum(gens[i].p_gen for i in gen_idx)
        total_load = sum(loads[i].p_load for i in load_idx)
        target = total_load * (1.0 + loss_margin)
        delta = target - total_gen
        shed_total = 0.0
        feasible = True
        note = ""

        if abs(delta) < 1e-12:
            records.append(RedispatchRecord(island.label, 0.0, 0.0, True))
            continue

        if delta < 0.0:
            room = {i: gens[i].p_gen - gens[i].p_min for i in gen_idx}
            total_room = sum(room.values())
            reduce = min(-delta, total_room)
            if total_room < -delta - 1e-9:
                feasible = False
                note = (
                    f"cannot curtail below p_min: {-delta - total_room:.1f} MW "
                    "of surplus remains"
                )
            if total_room > 0.0:
                for i in gen_idx:
                    gens[i] = replace(gens[i], p_gen=gens[i].p_gen - reduce * room[i] / total_room)
            applied = -reduce
        else:
            room = {i: gens[i].p_max - gens[i].p_gen for i in gen_idx}
            total_room = sum(room.values())
            raise_by = min(delta, total_room)
            if total_room > 0.0:
                for i in gen_idx:
                    gens[i] = replace(gens[i], p_gen=gens[i].p_gen + raise_by * room[i] / total_room)
            applied = raise_by
            if raise_by < delta - 1e-9:
                shed_total = delta - raise_by          # = target - sum(p_max)
                sheddable = {i: loads[i].p_load * loads[i].sheddable_fraction
                             for i in load_idx}
                total_sheddable = sum(sheddable.values())
                if total_sheddable + 1e-9 < shed_total:
                    feasible = False
                    note = (
                        f"insufficient capacity and sheddable load: "
                        f"{shed_total - total_sheddable:.1f} MW gap remains"
                    )
                    shed_total = total_sheddable
                if total_sheddable > 0.0 and shed_total > 0.0:
                    for i in load_idx:
                        cut_mw = shed_total * sheddable[i] / total_sheddable
                        l = loads[i]
                        ratio = (l.p_load - cut_mw) / l.p_load if l.p_load > 0 else 0.0
                        loads[i] = replace(l, p_load=l.p_load - cut_mw, q_load=l.q_load * ratio)

        records.append(
            RedispatchRecord(island.label, applied, shed_total, feasible, note)
        )

    new_case = replace(case, generators=tuple(gens), loads=tuple(loads))
    return new_case, records


# ---------------------------------------------------------------------------
# Island sub-cases and evaluation
# ---------------------------------------------------------------------------

def island_subcase(case: NetworkCase, plan: IslandingPlan, label: int) -> NetworkCase:
    """Standalone case for one island of the plan.

    Keeps the original slack bus when the island contains it; otherwise the
    in-service generator bus with the largest p_max becomes the slack (ties
    to the lowest bus id). Cross-island HVDC transfers are preserved as
    fixed injections so the island balance stays honest.
    """
    spec = next((i for i in plan.islands if i.label == label), None)
    if spec is None:
        raise ValidationError(f"no island labelled {label} in plan")
    members = set(spec.buses)
    gen_buses = {g.bus for g in case.generators if g.in_service and g.bus in members}
    if not gen_buses:
        raise ValidationError(f"island {label} has no in-service generator")

    old_slack = next(
        (b.id for b in case.buses if b.kind == SLACK and b.id in members and b.id in gen_buses),
        None,
    )
    if old_slack is not None:
        slack_bus = old_slack
    else:
        best = max(
            ((sum(g.p_max for g in case.generators if g.in_service and g.bus == bus), -bus)
             for bus in gen_buses),
        )
        slack_bus = -best[1]

    buses = []
    for b in case.buses:
        if b.id not in members:
            continue
        if b.id == slack_bus:
            buses.append(replace(b, kind=SLACK))
        elif b.kind == SLACK:
            buses.append(replace(b, kind=PV if b.id in gen_buses else PQ))
        else:
            buses.append(b)

    branches = []
    extra_loads: list[Load] = []
    extra_gens: list[Generator] = []
    for br in case.branches:
        inside_f, inside_t = br.from_bus in members, br.to_bus in members
        if inside_f and inside_t:
            branches.append(br)
        elif br.is_hvdc and br.in_service and (inside_f or inside_t):
            p = br.hvdc_p_mw
            bus = br.from_bus if inside_f else br.to_bus
            exported = p if inside_f else -p
            if exported >= 0.0:
                extra_loads.append(Load(bus=bus, p_load=exported))
            else:
                extra_gens.append(
                    Generator(bus=bus, p_gen=-exported, p_min=-exported, p_max=-exported)
                )

    zones = set(spec.zones)
    return NetworkCase(
        base_mva=case.base_mva,
        buses=tuple(buses),
        branches=tuple(branches),
        generators=tuple(g for g in case.generators if g.bus in members) + tuple(extra_gens),
        loads=tuple(l for l in case.loads if l.bus in members) + tuple(extra_loads),
        shunts=tuple(s for s in case.shunts if s.bus in members),
        zone_names={z: case.zone_names.get(z, z) for z in zones},
        external_zones=frozenset(z for z in case.external_zones if z in zones),
    )


def evaluate(case: NetworkCase, g: ZoneGraph, plan: IslandingPlan,
             options: EvaluateOptions | None = None,
             ) -> tuple[IslandReport, dict[int, PowerFlowSolution]]:
    """Redispatch, split, and screen every island with its own power flow.

    Returns the report plus the per-island solutions (keyed by island label)
    so callers can inspect or re-export flows. A diverging or structurally
    broken island is flagged and the remaining islands still evaluated.
    """
    opts = options or EvaluateOptions()
    p = p_metric(g, plan.partition)
    balanced, records = redispatch_and_shed(case, plan, loss_margin=opts.loss_margin)
    by_label = {rec.label: rec for rec in records}

    results = []
    solutions: dict[int, PowerFlowSolution] = {}
    for island in plan.islands:
        rec = by_label[island.label]
        note = rec.note
        converged = False
        min_v: float | None = None
        overloads = 0
        unscreened = 0
        slack_bus: int | None = None
        residual: float | None = None
        sol: PowerFlowSolution | None = None
        try:
            sub = island_subcase(balanced, plan, island.label)
            slack_bus = next(b.id for b in sub.buses if b.kind == SLACK)
            sol = solve(sub, options=opts.powerflow)
        except (ValidationError, NumericalError) as exc:
            note = (note + "; " if note else "") + str(exc)
        if sol is not None:
            solutions[island.label] = sol
            converged = sol.converged
            if converged:
                min_v = min(sol.v_mag.values())
                scheduled = sum(
                    gnr.p_gen for gnr in sub.generators
                    if gnr.in_service and gnr.bus == slack_bus
                )
                residual = sol.slack_p_mw - scheduled
                for i, br in enumerate(sub.branches):
                    if not br.in_service or i not in sol.s_from:
                        continue
                    if br.rating_mva <= 0.0:
                        unscreened += 1
                        continue
                    if max(abs(sol.s_from[i]), abs(sol.s_to[i])) > br.rating_mva + 1e-6:
                        overloads += 1
            else:
                note = (note + "; " if note else "") + "power flow did not converge"

        island_load = sum(l.p_load for l in balanced.loads if l.bus in set(island.buses))
        viable = (
            rec.feasible
            and converged
            and min_v is not None and min_v >= opts.min_voltage_pu
            and overloads == 0
            and residual is not None
            and abs(residual) <= opts.slack_residual_fraction * max(island_load, 1.0)
        )
        results.append(
            IslandResult(
                label=island.label,
                zones=island.zones,
                redispatch_mw=rec.redispatch_mw,
                shed_mw=rec.shed_mw,
                converged=converged,
                min_voltage=min_v,
                overload_count=overloads,
                unscreened_branches=unscreened,
                slack_bus=slack_bus,
                slack_residual_mw=residual,
                viable=viable,
                note=note,
            )
        )

    report = IslandReport(
        r=plan.partition.r,
        p=p,
        switching_count=len(plan.cut_lines),
        cut_lines=plan.cut_lines,
        islands=tuple(results),
    )
    return report, solutions
