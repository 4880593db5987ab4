"""Electrical network case: domain types, ingestion, validation, serialization.

A NetworkCase is the bus/branch/generator/load/shunt description of the study
system plus the zone assignment that later stages aggregate over. Cases are
frozen dataclasses: anything that "modifies" a case builds a new one.

Two input formats are supported:

* native JSON, schema ``gridsplit-case/1`` (full fidelity, round-trips);
* MATPOWER-style text cases (``mpc.bus`` / ``mpc.gen`` / ``mpc.branch``
  matrices in the standard column order). Other tables are ignored with a
  warning. Loads and shunts are lifted out of the bus matrix.

Zone assignments may be overridden by a sidecar JSON map ``{bus_id: zone}``,
since the area numbers shipped with public cases rarely match study zones.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ValidationError

CASE_SCHEMA = "gridsplit-case/1"

SLACK, PV, PQ = "slack", "PV", "PQ"
_BUS_KINDS = (SLACK, PV, PQ)


@dataclass(frozen=True)
class Bus:
    id: int
    zone: str
    kind: str = PQ                  # slack | PV | PQ
    base_kv: float = 1.0
    v_mag: float = 1.0              # p.u.; doubles as the PV/slack setpoint
    v_ang: float = 0.0              # radians
    v_min: float = 0.9
    v_max: float = 1.1


@dataclass(frozen=True)
class Branch:
    from_bus: int
    to_bus: int
    r: float = 0.0                  # p.u. series resistance
    x: float = 0.0                  # p.u. series reactance
    b_shunt: float = 0.0            # p.u. total line charging
    tap: float = 1.0                # off-nominal ratio at the from end
    rating_mva: float = 0.0         # 0 = unrated
    is_hvdc: bool = False
    in_service: bool = True
    hvdc_p_mw: float = 0.0          # fixed transfer from -> to; no converter model


@dataclass(frozen=True)
class Generator:
    bus: int
    p_gen: float = 0.0              # MW
    q_gen: float = 0.0              # MVAr
    p_min: float = 0.0
    p_max: float = 0.0
    q_min: float = 0.0
    q_max: float = 0.0
    in_service: bool = True


@dataclass(frozen=True)
class Load:
    bus: int
    p_load: float = 0.0             # MW
    q_load: float = 0.0             # MVAr
    sheddable_fraction: float = 0.0


@dataclass(frozen=True)
class Shunt:
    bus: int
    g_mw: float = 0.0               # MW consumed at V = 1.0 p.u.
    b_mvar: float = 0.0             # MVAr injected at V = 1.0 p.u.
    switched: bool = False          # switched shunts are held at setpoint
    in_service: bool = True


@dataclass(frozen=True)
class NetworkCase:
    base_mva: float
    buses: tuple[Bus, ...]
    branches: tuple[Branch, ...]
    generators: tuple[Generator, ...] = ()
    loads: tuple[Load, ...] = ()
    shunts: tuple[Shunt, ...] = ()
    zone_names: dict[str, str] = field(default_factory=dict)
    external_zones: frozenset[str] = frozenset()

    def bus_by_id(self, bus_id: int) -> Bus:
        return self._bus_index()[bus_id]

    def _bus_index(self) -> dict[int, Bus]:
        # dataclass is frozen; cache through object.__setattr__
        cached = self.__dict__.get("_bus_index_cache")
        if cached is None:
            cached = {b.id: b for b in self.buses}
            object.__setattr__(self, "_bus_index_cache", cached)
        return cached

    @property
    def zones(self) -> tuple[str, ...]:
        """Distinct zone ids in bus order of first appearance."""
        seen: dict[str, None] = {}
        for b in self.buses:
            seen.setdefault(b.zone, None)
        return tuple(seen)

    @property
    def study_zones(self) -> tuple[str, ...]:
        return tuple(z for z in self.zones if z not in self.external_zones)

    def total_generation_mw(self) -> float:
        return sum(g.p_gen for g in self.generators if g.in_service)

    def total_load_mw(self) -> float:
        return sum(l.p_load for l in self.loads)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_case(case: NetworkCase) -> list[str]:
    """Return a list of findings; an empty list means the case is sound.

    Checks referential integrity (no dangling bus ids, zones present) and the
    per-type invariants. Slack uniqueness is deliberately not checked here:
    it is a solve-time property of the subnetwork being solved.
    """
    findings: list[str] = []
    ids = [b.id for b in case.buses]
    known = set(ids)
    if len(known) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        findings.append(f"duplicate bus ids: {dupes}")
    if case.base_mva <= 0:
        findings.append(f"base_mva must be positive, got {case.base_mva}")

    for b in case.buses:
        if b.kind not in _BUS_KINDS:
            findings.append(f"bus {b.id}: unknown kind {b.kind!r}")
        if b.base_kv <= 0:
            findings.append(f"bus {b.id}: base_kv must be positive, got {b.base_kv}")
        if b.v_min > b.v_max:
            findings.append(f"bus {b.id}: v_min {b.v_min} exceeds v_max {b.v_max}")
        if not b.zone:
            findings.append(f"bus {b.id}: missing zone assignment")

    for i, br in enumerate(case.branches):
        for end in (br.from_bus, br.to_bus):
            if end not in known:
                findings.append(f"branch {i} ({br.from_bus}-{br.to_bus}): undefined bus {end}")
        if br.from_bus == br.to_bus:
            findings.append(f"branch {i}: from_bus equals to_bus ({br.from_bus})")
        if not br.is_hvdc and br.x == 0.0:
            findings.append(f"branch {i} ({br.from_bus}-{br.to_bus}): AC branch with zero reactance")
        if br.rating_mva < 0:
            findings.append(f"branch {i}: negative rating_mva {br.rating_mva}")
        if br.tap <= 0:
            findings.append(f"branch {i}: tap ratio must be positive, got {br.tap}")

    for i, g in enumerate(case.generators):
        if g.bus not in known:
            findings.append(f"generator {i}: undefined bus {g.bus}")
        if g.in_service and not (g.p_min <= g.p_gen <= g.p_max):
            findings.append(
                f"generator {i} at bus {g.bus}: p_gen {g.p_gen} outside [{g.p_min}, {g.p_max}]"
            )
        if g.q_min > g.q_max:
            findings.append(f"generator {i} at bus {g.bus}: q_min {g.q_min} exceeds q_max {g.q_max}")

    for i, l in enumerate(case.loads):
        if l.bus not in known:
            findings.append(f"load {i}: undefined bus {l.bus}")
        if l.p_load < 0:
            findings.append(f"load {i} at bus {l.bus}: negative p_load {l.p_load}")
        if not (0.0 <= l.sheddable_fraction <= 1.0):
            findings.append(
                f"load {i} at bus {l.bus}: sheddable_fraction {l.sheddable_fraction} outside [0, 1]"
            )

    for i, s in enumerate(case.shunts):
        if s.bus not in known:
            findings.append(f"shunt {i}: undefined bus {s.bus}")

    present = {b.zone for b in case.buses}
    for z in sorted(case.external_zones):
        if z not in present:
            findings.append(f"external zone {z!r} has no buses")
    return findings


def _checked(case: NetworkCase) -> NetworkCase:
    findings = validate_case(case)
    if findings:
        raise ValidationError(f"case failed validation with {len(findings)} finding(s)", findings)
    return case


# ---------------------------------------------------------------------------
# Native JSON format (gridsplit-case/1)
# ---------------------------------------------------------------------------

def case_to_dict(case: NetworkCase) -> dict:
    return {
        "schema": CASE_SCHEMA,
        "base_mva": case.base_mva,
        "buses": [
            {
                "id": b.id, "zone": b.zone, "kind": b.kind, "base_kv": b.base_kv,
                "v_mag": b.v_mag, "v_ang": b.v_ang, "v_min": b.v_min, "v_max": b.v_max,
            }
            for b in case.buses
        ],
        "branches": [
            {
                "from_bus": br.from_bus, "to_bus": br.to_bus, "r": br.r, "x": br.x,
                "b_shunt": br.b_shunt, "tap": br.tap, "rating_mva": br.rating_mva,
                "is_hvdc": br.is_hvdc, "in_service": br.in_service, "hvdc_p_mw": br.hvdc_p_mw,
            }
            for br in case.branches
        ],
        "generators": [
            {
                "bus": g.bus, "p_gen": g.p_gen, "q_gen": g.q_gen, "p_min": g.p_min,
                "p_max": g.p_max, "q_min": g.q_min, "q_max": g.q_max, "in_service": g.in_service,
            }
            for g in case.generators
        ],
        "loads": [
            {
                "bus": l.bus, "p_load": l.p_load, "q_load": l.q_load,
                "sheddable_fraction": l.sheddable_fraction,
            }
            for l in case.loads
        ],
        "shunts": [
            {
                "bus": s.bus, "g_mw": s.g_mw, "b_mvar": s.b_mvar,
                "switched": s.switched, "in_service": s.in_service,
            }
            for s in case.shunts
        ],
        "zones": dict(case.zone_names) or {z: z for z in case.zones},
        "external_zones": sorted(case.external_zones),
    }


def case_from_dict(doc: dict) -> NetworkCase:
    schema = doc.get("schema")
    if schema != CASE_SCHEMA:
        raise ValidationError(f"unsupported case schema {schema!r}, expected {CASE_SCHEMA!r}")
    try:
        case = NetworkCase(
            base_mva=float(doc["base_mva"]),
            buses=tuple(
                Bus(
                    id=int(b["id"]), zone=str(b["zone"]), kind=str(b.get("kind", PQ)),
                    base_kv=float(b.get("base_kv", 1.0)), v_mag=float(b.get("v_mag", 1.0)),
                    v_ang=float(b.get("v_ang", 0.0)), v_min=float(b.get("v_min", 0.9)),
                    v_max=float(b.get("v_max", 1.1)),
                )
                for b in doc["buses"]
            ),
            branches=tuple(
                Branch(
                    from_bus=int(br["from_bus"]), to_bus=int(br["to_bus"]),
                    r=float(br.get("r", 0.0)), x=float(br.get("x", 0.0)),
                    b_shunt=float(br.get("b_shunt", 0.0)), tap=float(br.get("tap", 1.0)),
                    rating_mva=float(br.get("rating_mva", 0.0)),
                    is_hvdc=bool(br.get("is_hvdc", False)),
                    in_service=bool(br.get("in_service", True)),
                    hvdc_p_mw=float(br.get("hvdc_p_mw", 0.0)),
                )
                for br in doc["branches"]
            ),
            generators=tuple(
                Generator(
                    bus=int(g["bus"]), p_gen=float(g.get("p_gen", 0.0)),
                    q_gen=float(g.get("q_gen", 0.0)), p_min=float(g.get("p_min", 0.0)),
                    p_max=float(g.get("p_max", 0.0)), q_min=float(g.get("q_min", 0.0)),
                    q_max=float(g.get("q_max", 0.0)), in_service=bool(g.get("in_service", True)),
                )
                for g in doc.get("generators", ())
            ),
            loads=tuple(
                Load(
                    bus=int(l["bus"]), p_load=float(l.get("p_load", 0.0)),
                    q_load=float(l.get("q_load", 0.0)),
                    sheddable_fraction=float(l.get("sheddable_fraction", 0.0)),
                )
                for l in doc.get("loads", ())
            ),
            shunts=tuple(
                Shunt(
                    bus=int(s["bus"]), g_mw=float(s.get("g_mw", 0.0)),
                    b_mvar=float(s.get("b_mvar", 0.0)), switched=bool(s.get("switched", False)),
                    in_service=bool(s.get("in_service", True)),
                )
                for s in doc.get("shunts", ())
            ),
            zone_names={str(k): str(v) for k, v in doc.get("zones", {}).items()},
            external_zones=frozenset(str(z) for z in doc.get("external_zones", ())),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed case document: {exc}") from exc
    return _checked(case)


# ---------------------------------------------------------------------------
# MATPOWER-style text cases
# ---------------------------------------------------------------------------

_MATRIX_RE = re.compile(r"mpc\.(\w+)\s*=\s*\[(.*?)\];", re.DOTALL)
_SCALAR_RE = re.compile(r"mpc\.baseMVA\s*=\s*([0-9eE+.\-]+)\s*;")

# handled matrices; everything else in the file is reported and skipped
_MATPOWER_TABLES = ("bus", "gen", "branch")


def _parse_matrix(text: str) -> list[list[float]]:
    rows: list[list[float]] = []
    for raw in re.split(r";|\n", text):
        line = raw.split("%")[0].strip()
        if not line:
            continue
        try:
            rows.append([float(tok) for tok in line.replace(",", " ").split()])
        except ValueError as exc:
            raise ValidationError(f"unparseable matrix row: {line!r}") from exc
    return rows


def parse_matpower(path: str | Path) -> NetworkCase:
    """Read a MATPOWER-style text case (bus/gen/branch, standard columns).

    Loads come from the bus PD/QD columns, shunts from GS/BS. The bus AREA
    column seeds the zone assignment as a plain string; a sidecar map is the
    intended way to impose study zones. Nonzero branch phase-shift angles are
    not modeled and are dropped with a warning.
    """
    text = Path(path).read_text()
    m = _SCALAR_RE.search(text)
    if m is None:
        raise ValidationError(f"{path}: no mpc.baseMVA found; not a MATPOWER case?")
    base_mva = float(m.group(1))

    tables = {name: _parse_matrix(body) for name, body in _MATRIX_RE.findall(text)}
    ignored = sorted(set(tables) - set(_MATPOWER_TABLES))
    if ignored:
        warnings.warn(f"{path}: ignoring MATPOWER tables {ignored}", stacklevel=2)
    missing = [t for t in _MATPOWER_TABLES if t not in tables]
    if missing:
        raise ValidationError(f"{path}: missing MATPOWER tables {missing}")

    kind_map = {1: PQ, 2: PV, 3: SLACK}
    buses: list[Bus] = []
    loads: list[Load] = []
    shunts: list[Shunt] = []
    for row in tables["bus"]:
        if len(row) < 13:
            raise ValidationError(f"bus row too short ({len(row)} columns): {row}")
        bus_id = int(row[0])
        kind = kind_map.get(int(row[1]))
        if kind is None:
            if int(row[1]) == 4:    # isolated bus
                continue
            raise ValidationError(f"bus {bus_id}: unknown MATPOWER bus type {int(row[1])}")
        base_kv = row[9] if row[9] > 0 else 1.0
        buses.append(
            Bus(
                id=bus_id, zone=str(int(row[6])), kind=kind, base_kv=base_kv,
                v_mag=row[7], v_ang=_deg2rad(row[8]), v_min=row[12], v_max=row[11],
            )
        )
        if row[2] != 0.0 or row[3] != 0.0:
            loads.append(Load(bus=bus_id, p_load=row[2], q_load=row[3]))
        if row[4] != 0.0 or row[5] != 0.0:
            shunts.append(Shunt(bus=bus_id, g_mw=row[4], b_mvar=row[5]))

    gens: list[Generator] = []
    pv_setpoint: dict[int, float] = {}
    for row in tables["gen"]:
        if len(row) < 10:
            raise ValidationError(f"gen row too short ({len(row)} columns): {row}")
        in_service = row[7] > 0
        gens.append(
            Generator(
                bus=int(row[0]), p_gen=row[1], q_gen=row[2], p_min=row[9], p_max=row[8],
                q_min=row[4], q_max=row[3], in_service=in_service,
            )
        )
        if in_service and row[5] > 0:
            pv_setpoint.setdefault(int(row[0]), row[5])
    # regulated buses start (and are held) at the generator voltage setpoint
    buses = [
        replace(b, v_mag=pv_setpoint[b.id]) if b.kind in (PV, SLACK) and b.id in pv_setpoint else b
        for b in buses
    ]

    branches: list[Branch] = []
    shifted = 0
    for row in tables["branch"]:
        if len(row) < 11:
            raise ValidationError(f"branch row too short ({len(row)} columns): {row}")
        if row[9] != 0.0:
            shifted += 1
        branches.append(
            Branch(
                from_bus=int(row[0]), to_bus=int(row[1]), r=row[2], x=row[3], b_shunt=row[4],
                tap=row[8] if row[8] != 0.0 else 1.0, rating_mva=max(row[5], 0.0),
                in_service=row[10] > 0,
            )
        )
    if shifted:
        warnings.warn(
            f"{path}: {shifted} branch(es) carry a phase-shift angle; shifts are not modeled",
            stacklevel=2,
        )

    return _checked(
        NetworkCase(
            base_mva=base_mva, buses=tuple(buses), branches=tuple(branches),
            generators=tuple(gens), loads=tuple(loads), shunts=tuple(shunts),
        )
    )


def _deg2rad(deg: float) -> float:
    import math

    return deg * math.pi / 180.0


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

def load_zone_map(path: str | Path) -> dict[int, str]:
    """Read a sidecar JSON map ``{"<bus_id>": "<zone_id>"}``."""
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON zone map: {exc}") from exc
    if not isinstance(raw, dict):
        raise ValidationError(f"{path}: zone map must be a JSON object")
    return {int(k): str(v) for k, v in raw.items()}


def apply_zone_map(case: NetworkCase, zone_map: dict[int, str],
                   external_zones: set[str] | None = None) -> NetworkCase:
    """Reassign bus zones from a sidecar map; the map overrides case areas.

    Buses absent from the map keep their in-case zone. ``external_zones``
    replaces the case's external set when given.
    """
    unknown = sorted(set(zone_map) - {b.id for b in case.buses})
    if unknown:
        raise ValidationError(f"zone map references undefined buses {unknown}")
    buses = tuple(replace(b, zone=zone_map.get(b.id, b.zone)) for b in case.buses)
    ext = frozenset(external_zones) if external_zones is not None else case.external_zones
    zone_names = {z: case.zone_names.get(z, z) for z in {b.zone for b in buses} | set(ext)}
    return _checked(replace(case, buses=buses, zone_names=zone_names, external_zones=ext))


def parse_case(path: str | Path, fmt: str | None = None,
               zone_map: str | Path | dict[int, str] | None = None) -> NetworkCase:
    """Load a case from disk. ``fmt`` is ``"json"`` or ``"matpower"``;
    when omitted it is inferred from the file extension (.json / .m).

    ``zone_map`` optionally applies a sidecar zone assignment on top.
    """
    p = Path(path)
    if not p.exists():
        raise ValidationError(f"case file not found: {p}")
    if fmt is None:
        fmt = {"json": "json", "m": "matpower"}.get(p.suffix.lstrip("."), "")
    if fmt == "json":
        try:
            doc = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{p}: invalid JSON: {exc}") from exc
        case = case_from_dict(doc)
    elif fmt == "matpower":
        case = parse_matpower(p)
    else:
        raise ValidationError(f"unsupported case format tag {fmt!r} for {p}")
    if zone_map is not None:
        mapping = zone_map if isinstance(zone_map, dict) else load_zone_map(zone_map)
        case = apply_zone_map(case, mapping)
    return case


def save_case(case: NetworkCase, path: str | Path) -> None:
    Path(path).write_text(json.dumps(case_to_dict(case), indent=2, sort_keys=True) + "\n")


def tie_lines(case: NetworkCase, zone_a: str, zone_b: str) -> tuple[int, ...]:
    """Ids (positions in ``case.branches``) of in-service branches with one
    endpoint in each zone. HVDC ties are included; callers filter on the
    ``is_hvdc`` flag when they need AC ties only.
    """
    zones = set(case.zones)
    for z in (zone_a, zone_b):
        if z not in zones:
            raise ValidationError(f"unknown zone {z!r}")
    if zone_a == zone_b:
        return ()
    by_bus = {b.id: b.zone for b in case.buses}
    pair = {zone_a, zone_b}
    return tuple(
        i for i, br in enumerate(case.branches)
        if br.in_service and {by_bus[br.from_bus], by_bus[br.to_bus]} == pair
    )
