"""Read-only SPARQL endpoint serving a snapshot over HTTP."""

from __future__ import annotations

import json
import threading
import urllib.parse
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .engine import execute_local
from .errors import ParseError, UnsupportedFeature
from .remote import RESULTS_MIME
from .snapshot import Snapshot


class _Handler(BaseHTTPRequestHandler):
    server_version = "lexsparql-mock/0.1"
    snapshot: Snapshot  # set on the per-server subclass

    def log_message(self, format, *args):  # noqa: A002 - keep the stdlib signature
        pass

    def do_GET(self):
        parsed = urllib.parse.urlparse(self.path)
        params = urllib.parse.parse_qs(parsed.query)
        self._answer(params.get("query", [None])[0])

    def do_POST(self):
        length = int(self.headers.get("Content-Length") or 0)
        body = self.rfile.read(length).decode("utf-8")
        ctype = (self.headers.get("Content-Type") or "").split(";")[0].strip()
        if ctype == "application/sparql-query":
            self._answer(body)
        else:
            self._answer(urllib.parse.parse_qs(body).get("query", [None])[0])

    def _answer(self, query):
        if not query:
            self._send(400, "text/plain", "missing 'query' parameter")
            return
        try:
            result = execute_local(query, self.snapshot)
        except UnsupportedFeature as exc:
            self._send(400, "text/plain", f"unsupported feature: {exc.feature}")
            return
        except ParseError as exc:
            self._send(400, "text/plain", f"malformed query: {exc}")
            return
        except Exception as exc:  # a bug in the evaluator should not look like a bad query
            self._send(500, "text/plain", f"internal error: {exc}")
            return
        payload = json.dumps(result.to_json(), ensure_ascii=False, sort_keys=True)
        self._send(200, RESULTS_MIME + "; charset=utf-8", payload)

    def _send(self, status: int, ctype: str, text: str):
        data = text.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


class MockEndpoint:
    """Handle for a running mock endpoint. Also a context manager."""

    def __init__(self, server: ThreadingHTTPServer):
        self._server = server
        self._thread = threading.Thread(target=server.serve_forever, daemon=True)
        self._thread.start()

    @property
    def url(self) -> str:
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}/sparql"

    def shutdown(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        self._thread.join()

    def serve_forever(self) -> None:
        self._thread.join()

    def __enter__(self) -> "MockEndpoint":
        return self

    def __exit__(self, *exc) -> None:
        self.shutdown()


def serve_mock(snapshot: Snapshot, bind_address: str = "127.0.0.1:0") -> MockEndpoint:
    """Start serving ``snapshot``; port 0 picks a free port."""
    host, _, port = bind_address.rpartition(":")
    if not host:
        host = "127.0.0.1"
    handler = type("SnapshotHandler", (_Handler,), {"snapshot": snapshot})
    server = ThreadingHTTPServer((host, int(port or 0)), handler)
    server.daemon_threads = True
    return MockEndpoint(server)
