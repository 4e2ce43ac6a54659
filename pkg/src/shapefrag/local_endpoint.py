"""A small SPARQL protocol server over an in-memory Oxigraph store.

Used as a reference endpoint when no external one is configured. Serves
queries on ``/sparql`` and updates on ``/update``.
"""
from __future__ import annotations

import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

try:
    import pyoxigraph as ox
except ImportError:  # pragma: no cover - optional
    ox = None


def available() -> bool:
    return ox is not None


class _Handler(BaseHTTPRequestHandler):
    server_version = "shapefrag-local/0.1"

    def log_message(self, fmt, *args):
        pass

    def _params(self) -> dict:
        url = urlparse(self.path)
        params = parse_qs(url.query)
        if self.command == "POST":
            length = int(self.headers.get("Content-Length") or 0)
            body = self.rfile.read(length).decode("utf-8")
            ctype = self.headers.get("Content-Type", "")
            if ctype.startswith("application/x-www-form-urlencoded"):
                params.update(parse_qs(body))
            elif ctype.startswith("application/sparql-query"):
                params["query"] = [body]
            elif ctype.startswith("application/sparql-update"):
                params["update"] = [body]
        return {k: v[0] for k, v in params.items()}

    def _send(self, status: int, body: bytes, ctype: str = "text/plain; charset=utf-8"):
        self.send_response(status)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _handle(self):
        path = urlparse(self.path).path
        params = self._params()
        store = self.server.store
        try:
            if path == "/sparql" and "query" in params:
                with self.server.lock:
                    res = store.query(params["query"])
                    body = res.serialize(format=ox.QueryResultsFormat.JSON)
                self._send(200, body, "application/sparql-results+json")
            elif path == "/update" and "update" in params:
                with self.server.lock:
                    store.update(params["update"])
                self._send(204, b"")
            else:
                self._send(400, b"expected query on /sparql or update on /update")
        except (SyntaxError, ValueError, OSError) as e:
            self._send(400, str(e).encode("utf-8"))

    do_GET = _handle
    do_POST = _handle


class LocalEndpoint:
    """Context manager running the server on a free localhost port in a thread."""

    def __init__(self, host: str = "127.0.0.1", port: int = 0):
        if ox is None:
            raise RuntimeError("pyoxigraph is required for the local endpoint")
        self.httpd = ThreadingHTTPServer((host, port), _Handler)
        self.httpd.store = ox.Store()
        self.httpd.lock = threading.Lock()
        self.thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)

    @property
    def base(self) -> str:
        host, port = self.httpd.server_address[:2]
        return f"http://{host}:{port}"

    @property
    def query_url(self) -> str:
        return self.base + "/sparql"

    @property
    def update_url(self) -> str:
        return self.base + "/update"

    def start(self) -> "LocalEndpoint":
        self.thread.start()
        return self

    def stop(self) -> None:
        self.httpd.shutdown()
        self.httpd.server_close()

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()
