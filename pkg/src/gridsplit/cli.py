"""Command-line entry points.

Exit codes: 0 success, 2 validation failure, 3 numerical failure, 64 usage
error. Failures also emit a machine-readable JSON object on stderr so
wrapping tooling never has to scrape human text.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import GridsplitError, NumericalError, ValidationError
from .pipeline import ArtifactWriter, Pipeline, RunConfig

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _error_json("usage", message)
        raise SystemExit(EXIT_USAGE)


def _error_json(kind: str, message: str, findings: list[str] | None = None) -> None:
    doc = {"error": kind, "message": message}
    if findings:
        doc["findings"] = findings
    print(json.dumps(doc), file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gridsplit",
                     description="Partition a transmission grid into self-sustaining islands")
    sub = parser.add_subparsers(dest="command", metavar="command")

    def common(p, needs_r=False, needs_max=False):
        p.add_argument("--case", required=True, help="case file (.json or MATPOWER .m)")
        p.add_argument("--zones", help="sidecar JSON map bus id -> zone id")
        p.add_argument("--no-external", action="store_true",
                       help="drop external zones instead of collapsing them to vertex X")
        p.add_argument("--tol", type=float, default=1e-6,
                       help="power-flow convergence tolerance in p.u. (default 1e-6)")
        p.add_argument("--out", default="out", help="artifact output directory")
        if needs_r:
            p.add_argument("-r", type=int, required=True, help="number of islands")
        if needs_max:
            p.add_argument("--max-islands", type=int, default=9,
                           help="largest island count in the sweep (default 9)")

    common(sub.add_parser("validate", help="parse and validate the case"))
    common(sub.add_parser("solve", help="solve the intact-system power flow"))
    common(sub.add_parser("build-graph", help="aggregate the case into the zone graph"))
    common(sub.add_parser("spectral", help="eigenanalysis, eigengaps, embedding"))
    common(sub.add_parser("cluster", help="constrained Ward dendrogram"))
    common(sub.add_parser("plan", help="islanding plan for a cut at r"), needs_r=True)
    common(sub.add_parser("evaluate", help="redispatch, split, and screen islands"),
           needs_r=True)
    common(sub.add_parser("sweep", help="metrics table across island counts"),
           needs_max=True)
    serve = sub.add_parser("serve", help="local JSON-over-HTTP analysis service")
    common(serve)
    serve.add_argument("--port", type=int, default=8720,
                       help="port (env GRIDSPLIT_PORT overrides)")
    serve.add_argument("--ui", help="directory of built UI assets to serve statically")
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        case_path=args.case,
        zones_path=args.zones,
        include_external=not args.no_external,
        tol_pu=args.tol,
        out_dir=args.out,
        port=getattr(args, "port", 8720),
        ui_dir=getattr(args, "ui", None),
    )


def _run(args) -> int:
    pipe = Pipeline(_config(args))
    writer = ArtifactWriter(pipe)
    written = []

    def emit(name, data):
        written.append(writer.write(name, data))

    cmd = args.command
    if cmd == "validate":
        emit("case_summary.json", pipe.case_summary_bytes())
    elif cmd == "solve":
        emit("case_summary.json", pipe.case_summary_bytes())
        emit("powerflow.json", pipe.powerflow_bytes())
    elif cmd == "build-graph":
        emit("case_summary.json", pipe.case_summary_bytes())
        emit("graph.json", pipe.graph_bytes())
        emit("graph.dot", pipe.graph_dot_bytes())
    elif cmd == "spectral":
        emit("graph.json", pipe.graph_bytes())
        emit("spectral.json", pipe.spectral_bytes())
    elif cmd == "cluster":
        emit("spectral.json", pipe.spectral_bytes())
        emit("dendrogram.json", pipe.dendrogram_bytes())
    elif cmd == "plan":
        emit("dendrogram.json", pipe.dendrogram_bytes())
        emit("plan.json", pipe.plan_bytes(args.r))
    elif cmd == "evaluate":
        emit("plan.json", pipe.plan_bytes(args.r))
        emit("report.json", pipe.report_bytes(args.r))
    elif cmd == "sweep":
        emit("dendrogram.json", pipe.dendrogram_bytes())
        emit("sweep.csv", pipe.sweep_bytes(args.max_islands))
    elif cmd == "serve":
        from .service import run_service

        run_service(pipe)      # blocks
        return EXIT_OK
    for path in written:
        print(path)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        _error_json("usage", "missing subcommand")
        return EXIT_USAGE
    try:
        return _run(args)
    except ValidationError as exc:
        _error_json("validation", str(exc), exc.findings)
        return EXIT_VALIDATION
    except NumericalError as exc:
        _error_json("numerical", str(exc))
        return EXIT_NUMERICAL
    except GridsplitError as exc:
        _error_json("validation", str(exc))
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
