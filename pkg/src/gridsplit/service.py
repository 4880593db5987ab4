"""Local JSON-over-HTTP analysis service consumed by the explorer UI.

Read-only GET endpoints mirror the CLI artifacts byte for byte (both sides
call the same Pipeline), plus POST /recompute to reload the case from disk.
Binds localhost only: this is an exploration surface, not a control plane.

  GET /case/summary          gridsplit-case-summary/1
  GET /graph                 gridsplit-graph/1
  GET /spectral              gridsplit-spectral/1
  GET /dendrogram            gridsplit-dendro/1
  GET /plan?r=N              gridsplit-plan/1
  GET /evaluate?r=N          gridsplit-report/1
  GET /sweep?max=M           CSV table (same bytes as the CLI emitter)
  POST /recompute            drop caches, re-read case files

Errors: 400 malformed parameters, 404 unknown path, 422 infeasible plan
requests, 500 numerical failures; bodies are JSON error objects.
"""

from __future__ import annotations

import json
import mimetypes
import os
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .errors import NumericalError, ValidationError
from .pipeline import Pipeline


class _Handler(BaseHTTPRequestHandler):
    pipeline: Pipeline = None          # set by make_server
    ui_dir: Path | None = None
    quiet: bool = True

    def log_message(self, fmt, *args):
        if not self.quiet:
            super().log_message(fmt, *args)

    # -- helpers ------------------------------------------------------------

    def _send(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _send_json_error(self, status: int, kind: str, message: str) -> None:
        body = json.dumps({"error": kind, "message": message}).encode() + b"\n"
        self._send(status, body, "application/json")

    def _int_param(self, query: dict, name: str) -> int:
        values = query.get(name)
        if not values:
            raise ValueError(f"missing query parameter {name!r}")
        try:
            value = int(values[0])
        except ValueError:
            raise ValueError(f"query parameter {name!r} must be an integer") from None
        if value < 1:
            raise ValueError(f"query parameter {name!r} must be >= 1")
        return value

    # -- routing ------------------------------------------------------------

    def do_GET(self):
        url = urlparse(self.path)
        query = parse_qs(url.query)
        try:
            if url.path == "/case/summary":
                return self._send(200, self.pipeline.case_summary_bytes(), "application/json")
            if url.path == "/graph":
                return self._send(200, self.pipeline.graph_bytes(), "application/json")
            if url.path == "/spectral":
                return self._send(200, self.pipeline.spectral_bytes(), "application/json")
            if url.path == "/dendrogram":
                return self._send(200, self.pipeline.dendrogram_bytes(), "application/json")
            if url.path == "/plan":
                r = self._int_param(query, "r")
                return self._send(200, self.pipeline.plan_bytes(r), "application/json")
            if url.path == "/evaluate":
                r = self._int_param(query, "r")
                return self._send(200, self.pipeline.report_bytes(r), "application/json")
            if url.path == "/sweep":
                m = self._int_param(query, "max")
                return self._send(200, self.pipeline.sweep_bytes(m), "text/csv")
            if self.ui_dir is not None:
                return self._send_static(url.path)
            return self._send_json_error(404, "not_found", f"unknown path {url.path}")
        except ValueError as exc:
            return self._send_json_error(400, "bad_request", str(exc))
        except ValidationError as exc:
            return self._send_json_error(422, "infeasible", str(exc))
        except NumericalError as exc:
            return self._send_json_error(500, "numerical", str(exc))

    def do_POST(self):
        if urlparse(self.path).path == "/recompute":
            self.pipeline.recompute()
            return self._send(200, b'{"status": "reloaded"}\n', "application/json")
        return self._send_json_error(404, "not_found", f"unknown path {self.path}")

    def _send_static(self, path: str) -> None:
        rel = path.lstrip("/") or "index.html"
        target = (self.ui_dir / rel).resolve()
        if not str(target).startswith(str(self.ui_dir.resolve())) or not target.is_file():
            return self._send_json_error(404, "not_found", f"unknown path {path}")
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self._send(200, target.read_bytes(), ctype)


def make_server(pipeline: Pipeline, port: int | None = None,
                quiet: bool = True) -> ThreadingHTTPServer:
    """Build the HTTP server without starting it (tests drive it directly).

    Port resolution: GRIDSPLIT_PORT env var beats the explicit argument,
    which beats the config default. Port 0 asks the OS for a free port.
    """
    env_port = os.environ.get("GRIDSPLIT_PORT")
    if env_port is not None:
        port = int(env_port)
    elif port is None:
        port = pipeline.config.port

    handler = type("Handler", (_Handler,), {
        "pipeline": pipeline,
        "ui_dir": Path(pipeline.config.ui_dir) if pipeline.config.ui_dir else None,
        "quiet": quiet,
    })
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def run_service(pipeline: Pipeline) -> None:
    server = make_server(pipeline, quiet=False)
    host, port = server.server_address
    print(f"gridsplit service on http://{host}:{port}  (case: {pipeline.config.case_path})")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
