"""Minimal HTTP inference service over a loaded checkpoint.

Endpoints: POST /suggest, GET /health, GET /model.  The model bundle is
loaded once and never mutated, so concurrent requests are safe; the only
shared state is a request counter.  CORS is enabled for localhost
origins so the browser demo can call the service directly.
"""

from __future__ import annotations

import json
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .pipeline import SuggestBundle, load_bundle

MAX_CONTEXT_CHARS = 10_000
_LOCALHOST_ORIGIN = re.compile(r"^https?://(localhost|127\.0\.0\.1)(:\d+)?$")


class _BadRequest(Exception):
    pass


def _parse_suggest_request(body: bytes) -> tuple:
    try:
        payload = json.loads(body.decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise _BadRequest(f"malformed JSON body: {e}") from e
    if not isinstance(payload, dict):
        raise _BadRequest("request body must be a JSON object")
    context = payload.get("context")
    if not isinstance(context, str):
        raise _BadRequest("field 'context' must be a string")
    if len(context) > MAX_CONTEXT_CHARS:
        raise _BadRequest(f"context exceeds {MAX_CONTEXT_CHARS} characters")
    k = payload.get("k", 5)
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise _BadRequest("field 'k' must be an integer >= 1")
    return context, k


class SuggestHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # quiet by default
        if getattr(self.server, "verbose", False):
            super().log_message(fmt, *args)

    @property
    def bundle(self) -> SuggestBundle:
        return self.server.bundle

    def _cors_headers(self):
        origin = self.headers.get("Origin", "")
        if _LOCALHOST_ORIGIN.match(origin):
            yield ("Access-Control-Allow-Origin", origin)
            yield ("Vary", "Origin")

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        for k, v in self._cors_headers():
            self.send_header(k, v)
        self.end_headers()
        self.wfile.write(body)

    def do_OPTIONS(self):
        self.send_response(204)
        for k, v in self._cors_headers():
            self.send_header(k, v)
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        self.server.count_request()
        if self.path == "/health":
            self._send_json(200, {"status": "ok"})
        elif self.path == "/model":
            info = dict(self.bundle.model_info)
            info["request_count"] = self.server.request_count
            self._send_json(200, info)
        else:
            self._send_json(404, {"error": f"no such endpoint: {self.path}"})

    def do_POST(self):
        self.server.count_request()
        if self.path != "/suggest":
            self._send_json(404, {"error": f"no such endpoint: {self.path}"})
            return
        length = int(self.headers.get("Content-Length") or 0)
        body = self.rfile.read(length)
        try:
            context, k = _parse_suggest_request(body)
        except _BadRequest as e:
            self._send_json(400, {"error": str(e)})
            return
        try:
            suggestions = self.bundle.suggest(context, k)
        except ValueError:
            self._send_json(422, {"error": "no usable context"})
            return
        self._send_json(200, {
            "suggestions": [
                {"token": token, "probability": prob} for token, prob in suggestions
            ],
            "model_info": self.bundle.model_info,
        })


class SuggestServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, bundle: SuggestBundle, host: str = "127.0.0.1",
                 port: int = 8080, verbose: bool = False):
        super().__init__((host, port), SuggestHandler)
        self.bundle = bundle
        self.verbose = verbose
        self._count_lock = threading.Lock()
        self.request_count = 0

    def count_request(self) -> None:
        with self._count_lock:
            self.request_count += 1


def make_server(checkpoint_dir, host: str = "127.0.0.1", port: int = 8080,
                source: str | None = None, n: int | None = None,
                verbose: bool = False) -> SuggestServer:
    bundle = load_bundle(checkpoint_dir, source=source, n=n)
    return SuggestServer(bundle, host=host, port=port, verbose=verbose)
