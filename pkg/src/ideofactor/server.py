"""Read-only local HTTP surface over an exported space.

Two endpoints, shared verbatim with the file exports:
    GET /space
    GET /recommend?user=&theta=&delta=&count=&seed=[&exclude_consumed=0|1]
Serving never mutates run artifacts; every response is recomputed from the
immutable space context.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .errors import IdeofactorError
from .pipeline import SpaceContext, recommendation_document, space_document


def _encode(document: dict) -> bytes:
    return (json.dumps(document, separators=(",", ":")) + "\n").encode("utf-8")


def _first(params, key, default=None):
    values = params.get(key)
    return values[0] if values else default


class SpaceRequestHandler(BaseHTTPRequestHandler):
    context: SpaceContext = None  # injected by make_server
    space_bytes: bytes = b""

    def log_message(self, fmt, *args):  # keep test output quiet
        pass

    def _send(self, status: int, payload: bytes):
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def do_GET(self):
        url = urlparse(self.path)
        if url.path == "/space":
            self._send(200, self.space_bytes)
            return
        if url.path == "/recommend":
            params = parse_qs(url.query)
            try:
                doc = recommendation_document(
                    self.context,
                    user_id=_first(params, "user", ""),
                    theta=float(_first(params, "theta", "0")),
                    delta=float(_first(params, "delta", "0")),
                    count=int(_first(params, "count", "10")),
                    seed=int(_first(params, "seed", "0")),
                    exclude_consumed=_first(params, "exclude_consumed", "1") not in ("0", "false"),
                )
            except (IdeofactorError, ValueError) as exc:
                self._send(400, _encode({"error": str(exc)}))
                return
            self._send(200, _encode(doc))
            return
        self._send(404, _encode({"error": f"unknown path {url.path}"}))


def make_server(context: SpaceContext, port: int = 0) -> ThreadingHTTPServer:
    """Bind a threading server on `port` (0 = ephemeral); caller runs it."""
    handler = type("BoundSpaceHandler", (SpaceRequestHandler,), {
        "context": context,
        "space_bytes": _encode(space_document(context)),
    })
    return ThreadingHTTPServer(("127.0.0.1", port), handler)
