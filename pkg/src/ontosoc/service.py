"""Minimal HTTP front end for the knowledge base.

Endpoints:
  GET  /sparql?query=...   evaluate a query, JSON results
  POST /graph              merge a Turtle body (validated by default)
  GET  /health             {"triples": n, "epoch": e}

Writes are serialized behind a lock and applied copy-on-write: the new
graph is built aside, the snapshot file is written atomically (temp file
then rename), and only then is the live graph reference swapped and the
epoch bumped.  Readers always see one consistent epoch, and a restart
loads the last fully persisted snapshot.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import parse_qs, urlparse

from .rdf import Graph, PrefixMap
from .schema import SchemaDef, builtin_schema, schema_from_graph, schema_prefixes
from .sparql import QueryError, evaluate, parse_query, to_json_results
from .turtle import Document, ParseError, parse_turtle, serialize_turtle
from .validation import validate

DEFAULT_PORT = 7474
DEFAULT_MAX_QUERY_LENGTH = 8192


@dataclass
class ServiceState:
    graph: Graph
    schema: SchemaDef
    snapshot_path: Optional[Path] = None
    validate_writes: bool = True
    max_query_length: int = DEFAULT_MAX_QUERY_LENGTH
    epoch: int = 0
    write_lock: threading.Lock = field(default_factory=threading.Lock)

    def apply_post(self, body: str) -> tuple[int, dict, str]:
        """Parse, validate, persist, swap.  Returns (status, headers-free
        payload info, body)."""
        try:
            doc = parse_turtle(body)
        except ParseError as exc:
            return 400, {}, json.dumps(
                {"error": "parse", "line": exc.line, "column": exc.column, "message": exc.message}
            )
        with self.write_lock:
            merged = self.graph.copy()
            added = merged.update(doc.graph)
            if self.validate_writes:
                report = validate(merged, self.schema)
                if not report.conforms:
                    return 422, {"content-type": "text/plain; charset=utf-8"}, report.render_machine() + "\n"
            try:
                self._persist(merged, self.epoch + 1)
            except OSError as exc:
                return 507, {}, json.dumps({"error": "snapshot", "message": str(exc)})
            self.graph = merged
            self.epoch += 1
            return 200, {}, json.dumps({"added": added, "epoch": self.epoch})

    def _persist(self, graph: Graph, epoch: int) -> None:
        if self.snapshot_path is None:
            return
        doc = Document(graph=graph, prefixes=PrefixMap(schema_prefixes()))
        self._atomic_write(self.snapshot_path, serialize_turtle(doc))
        self._atomic_write(epoch_sidecar(self.snapshot_path), f"{epoch}\n")

    @staticmethod
    def _atomic_write(path: Path, text: str) -> None:
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(text)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except OSError:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def run_query(self, query: str) -> tuple[int, str]:
        try:
            ast = parse_query(query)
        except QueryError as exc:
            return 400, json.dumps(
                {"error": "query", "line": exc.line, "column": exc.column, "message": exc.message}
            )
        table = evaluate(ast, self.graph)  # one consistent snapshot
        return 200, to_json_results(table)


def epoch_sidecar(snapshot_path: Path) -> Path:
    return snapshot_path.with_name(snapshot_path.name + ".epoch")


def load_state(
    data_path: Optional[str] = None,
    schema_path: Optional[str] = None,
    validate_writes: bool = True,
    max_query_length: int = DEFAULT_MAX_QUERY_LENGTH,
) -> ServiceState:
    if schema_path is not None:
        schema_doc = parse_turtle(Path(schema_path).read_text(encoding="utf-8"))
        schema = schema_from_graph(schema_doc.graph)
    else:
        schema = builtin_schema()
    graph = Graph()
    epoch = 0
    snapshot = Path(data_path) if data_path is not None else None
    if snapshot is not None and snapshot.exists():
        graph = parse_turtle(snapshot.read_text(encoding="utf-8")).graph
        sidecar = epoch_sidecar(snapshot)
        if sidecar.exists():
            epoch = int(sidecar.read_text(encoding="utf-8").strip() or "0")
    return ServiceState(
        graph=graph,
        schema=schema,
        snapshot_path=snapshot,
        validate_writes=validate_writes,
        max_query_length=max_query_length,
        epoch=epoch,
    )


class _Handler(BaseHTTPRequestHandler):
    state: ServiceState  # set by make_server

    def log_message(self, format: str, *args) -> None:  # quiet by default
        pass

    def _send(self, status: int, body: str, content_type: str = "application/json") -> None:
        payload = body.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def do_GET(self) -> None:
        url = urlparse(self.path)
        if url.path == "/health":
            self._send(200, json.dumps({"triples": len(self.state.graph), "epoch": self.state.epoch}))
            return
        if url.path == "/sparql":
            params = parse_qs(url.query)
            if "query" not in params:
                self._send(400, json.dumps({"error": "missing query parameter"}))
                return
            query = params["query"][0]
            if len(query) > self.state.max_query_length:
                self._send(414, json.dumps({"error": "query too long"}))
                return
            status, body = self.state.run_query(query)
            content_type = "application/sparql-results+json" if status == 200 else "application/json"
            self._send(status, body, content_type)
            return
        self._send(404, json.dumps({"error": "not found"}))

    def do_POST(self) -> None:
        url = urlparse(self.path)
        if url.path != "/graph":
            self._send(404, json.dumps({"error": "not found"}))
            return
        length = int(self.headers.get("Content-Length", "0"))
        body = self.rfile.read(length).decode("utf-8", errors="replace")
        status, headers, payload = self.state.apply_post(body)
        self._send(status, payload, headers.get("content-type", "application/json"))


def make_server(state: ServiceState, port: int = 0) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"state": state})
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def serve(
    port: int = DEFAULT_PORT,
    data_path: Optional[str] = None,
    schema_path: Optional[str] = None,
    validate_writes: bool = True,
) -> None:
    state = load_state(data_path, schema_path, validate_writes)
    server = make_server(state, port)
    print(f"listening on 127.0.0.1:{server.server_address[1]}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


if __name__ == "__main__":
    import argparse

    parser = argparse.ArgumentParser(description="knowledge-base HTTP service")
    parser.add_argument("--port", type=int, default=DEFAULT_PORT)
    parser.add_argument("--data")
    parser.add_argument("--schema")
    parser.add_argument("--no-validate", action="store_true")
    args = parser.parse_args()
    serve(args.port, args.data, args.schema, not args.no_validate)
