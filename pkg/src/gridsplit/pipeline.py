"""Staged artifact computation shared by the CLI and the HTTP service.

Both surfaces must emit byte-identical documents for the same inputs, so
every artifact is produced exactly once, here, as canonical bytes: JSON with
sorted keys, two-space indent, trailing newline. Results are cached per
(artifact, parameters) under a lock; the whole cache drops on recompute().

The p metric can be infinite (no intra-cluster weight); JSON carries that
as null so strict parsers on the UI side survive.
"""

from __future__ import annotations

import hashlib
import json
import math
import threading
from dataclasses import dataclass, field
from pathlib import Path

from . import clustering, islanding, network, powerflow, spectral, zonegraph
from .errors import NumericalError


def canonical_json(doc: object) -> bytes:
    text = json.dumps(_definite(doc), indent=2, sort_keys=True)
    return text.encode() + b"\n"


def _definite(obj: object) -> object:
    """Replace non-finite floats with None; strict JSON has no Infinity."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _definite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_definite(v) for v in obj]
    return obj


@dataclass(frozen=True)
class RunConfig:
    case_path: str
    zones_path: str | None = None
    include_external: bool = True
    tol_pu: float = 1e-6
    out_dir: str = "out"
    port: int = 8720
    ui_dir: str | None = None


class Pipeline:
    """Lazily computes and caches every artifact for one loaded case."""

    def __init__(self, config: RunConfig):
        self.config = config
        self._lock = threading.RLock()
        self._cache: dict[tuple, bytes] = {}
        self._objects: dict[str, object] = {}

    # -- case loading -------------------------------------------------------

    def recompute(self) -> None:
        """Drop every cached artifact; the next request re-reads the files."""
        with self._lock:
            self._cache.clear()
            self._objects.clear()

    def case_digest(self) -> str:
        h = hashlib.sha256()
        h.update(Path(self.config.case_path).read_bytes())
        if self.config.zones_path:
            h.update(Path(self.config.zones_path).read_bytes())
        return h.hexdigest()[:16]

    def case(self) -> network.NetworkCase:
        with self._lock:
            if "case" not in self._objects:
                self._objects["case"] = network.parse_case(
                    self.config.case_path, zone_map=self.config.zones_path
                )
            return self._objects["case"]

    def solution(self) -> powerflow.PowerFlowSolution:
        with self._lock:
            if "solution" not in self._objects:
                sol = powerflow.solve(
                    self.case(),
                    options=powerflow.PowerFlowOptions(tol_pu=self.config.tol_pu),
                )
                if not sol.converged:
                    raise NumericalError(
                        "intact-system power flow did not converge; "
                        f"max mismatch {sol.max_mismatch_mva:.3g} MVA",
                        residual=sol.max_mismatch_mva,
                    )
                self._objects["solution"] = sol
            return self._objects["solution"]

    def graph(self) -> zonegraph.ZoneGraph:
        with self._lock:
            if "graph" not in self._objects:
                flows = powerflow.branch_flows(self.solution(), self.case())
                self._objects["graph"] = zonegraph.build_zone_graph(
                    self.case(), flows, include_external=self.config.include_external
                )
            return self._objects["graph"]

    def report(self) -> spectral.SpectralReport:
        with self._lock:
            if "spectral" not in self._objects:
                self._objects["spectral"] = spectral.spectral_report(self.graph())
            return self._objects["spectral"]

    def dendrogram(self) -> clustering.Dendrogram:
        with self._lock:
            if "dendrogram" not in self._objects:
                self._objects["dendrogram"] = clustering.constrained_ward_cluster(
                    self.report().embedding, self.graph()
                )
            return self._objects["dendrogram"]

    def plan(self, r: int) -> islanding.IslandingPlan:
        return islanding.build_plan(self.case(), self.graph(), clustering.cut(self.dendrogram(), r))

    # -- artifact bytes -----------------------------------------------------

    def _cached(self, key: tuple, producer) -> bytes:
        with self._lock:
            if key not in self._cache:
                self._cache[key] = producer()
            return self._cache[key]

    def case_summary_bytes(self) -> bytes:
        def produce():
            case = self.case()
            doc = {
                "schema": "gridsplit-case-summary/1",
                "digest": self.case_digest(),
                "base_mva": case.base_mva,
                "buses": len(case.buses),
                "branches": len(case.branches),
                "generators": len(case.generators),
                "loads": len(case.loads),
                "shunts": len(case.shunts),
                "zones": sorted(case.zones),
                "external_zones": sorted(case.external_zones),
                "total_generation_mw": case.total_generation_mw(),
                "total_load_mw": case.total_load_mw(),
            }
            return canonical_json(doc)

        return self._cached(("case_summary",), produce)

    def powerflow_bytes(self) -> bytes:
        return self._cached(("powerflow",), lambda: canonical_json(self.solution().to_dict()))

    def graph_bytes(self) -> bytes:
        return self._cached(("graph",), lambda: canonical_json(self.graph().to_dict()))

    def graph_dot_bytes(self) -> bytes:
        return self._cached(("graph_dot",), lambda: self.graph().to_dot().encode())

    def spectral_bytes(self) -> bytes:
        return self._cached(("spectral",), lambda: canonical_json(self.report().to_dict()))

    def dendrogram_bytes(self) -> bytes:
        return self._cached(("dendrogram",), lambda: canonical_json(self.dendrogram().to_dict()))

    def plan_bytes(self, r: int) -> bytes:
        return self._cached(("plan", r), lambda: canonical_json(self.plan(r).to_dict()))

    def report_bytes(self, r: int) -> bytes:
        def produce():
            rep, _ = islanding.evaluate(
                self.case(), self.graph(), self.plan(r),
                options=islanding.EvaluateOptions(
                    powerflow=powerflow.PowerFlowOptions(tol_pu=self.config.tol_pu)
                ),
            )
            return canonical_json(rep.to_dict())

        return self._cached(("report", r), produce)

    def sweep_bytes(self, max_islands: int) -> bytes:
        def produce():
            rows = islanding.sweep_metrics(
                self.case(), self.graph(), self.dendrogram(), max_islands
            )
            return islanding.sweep_to_csv(rows).encode()

        return self._cached(("sweep", max_islands), produce)


@dataclass
class ArtifactWriter:
    """Writes pipeline artifacts into the output directory with fixed names."""

    pipeline: Pipeline
    out_dir: Path = field(init=False)

    def __post_init__(self):
        self.out_dir = Path(self.pipeline.config.out_dir)

    def write(self, name: str, data: bytes) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / name
        path.write_bytes(data)
        return path
