"""Reference implementation of the remote generation protocol.

Serves the built-in backend over the same wire format a production
deployment would speak, so integration tests (and demos without the real
model host) can exercise the full remote path. Generation is seeded per
request from the request's own seed field.
"""

from __future__ import annotations

import json
import logging
import random
import re
import threading
from datetime import date
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional, Tuple

from rumourmill.backends import DEFAULT_MAX_TOKENS, BuiltinBackend
from rumourmill.errors import ConfigMissing
from rumourmill.genremap import GenreMap, default_genre_map
from rumourmill.params import ControlSpec, Genre, genre_from_string

logger = logging.getLogger(__name__)

_LINKS_DATE = re.compile(r"/(\d{4})/(\d{2})/(\d{2})/$")


class _BadRequest(Exception):
    pass


class ReferenceHandler(BaseHTTPRequestHandler):
    server: "ReferenceServer"

    def log_message(self, fmt, *args):  # keep test output quiet
        logger.debug("refserver: " + fmt, *args)

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _read_json(self) -> dict:
        length = int(self.headers.get("Content-Length", "0"))
        try:
            body = json.loads(self.rfile.read(length).decode("utf-8"))
        except (ValueError, UnicodeDecodeError):
            raise _BadRequest("request body is not valid JSON")
        if not isinstance(body, dict):
            raise _BadRequest("request body must be a JSON object")
        return body

    @staticmethod
    def _field(body: dict, name: str, kind) -> object:
        value = body.get(name)
        if not isinstance(value, kind):
            raise _BadRequest(f"missing or mistyped field {name!r}")
        return value

    def do_GET(self):
        if self.path == "/v1/health":
            self._send_json(200, {"status": "ok"})
        else:
            self._send_json(404, {"error": "not found"})

    def do_POST(self):
        try:
            if self.path == "/v1/headline":
                self._send_json(200, {"text": self._headline()})
            elif self.path == "/v1/story":
                self._send_json(200, {"text": self._story()})
            else:
                self._send_json(404, {"error": "not found"})
        except _BadRequest as exc:
            self._send_json(400, {"error": str(exc)})
        except Exception as exc:
            logger.exception("reference server failure")
            self._send_json(500, {"error": f"{exc.__class__.__name__}: {exc}"})

    def _headline(self) -> str:
        body = self._read_json()
        temperature = float(self._field(body, "temperature", (int, float)))
        seed = self._field(body, "seed", int)
        try:
            genre = genre_from_string(self._field(body, "genre", str))
        except ValueError as exc:
            raise _BadRequest(str(exc)) from None
        if genre is Genre.Random:
            raise _BadRequest("genre must be concrete; resolve Random before the request")
        return self.server.backend.generate_headline(temperature, genre, random.Random(seed))

    def _story(self) -> str:
        body = self._read_json()
        headline = self._field(body, "headline", str)
        if not headline:
            raise _BadRequest("headline must be non-empty")
        temperature = float(self._field(body, "temperature", (int, float)))
        genre_code = self._field(body, "genre_code", str)
        links_code = self._field(body, "links_code", str)
        seed = self._field(body, "seed", int)
        try:
            genre = self.server.genre_map.genre_for_code(genre_code)
        except ConfigMissing as exc:
            raise _BadRequest(str(exc)) from None
        match = _LINKS_DATE.search(links_code)
        if not match:
            raise _BadRequest("links_code lacks a /YYYY/MM/DD/ date")
        target = date(int(match.group(1)), int(match.group(2)), int(match.group(3)))
        try:
            spec = ControlSpec(temperature, genre_code, links_code, target, genre)
        except ValueError as exc:
            raise _BadRequest(str(exc)) from None
        return self.server.backend.generate_story(headline, spec, random.Random(seed), DEFAULT_MAX_TOKENS)


class ReferenceServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(
        self,
        address: Tuple[str, int] = ("127.0.0.1", 0),
        backend: Optional[BuiltinBackend] = None,
        genre_map: Optional[GenreMap] = None,
    ):
        super().__init__(address, ReferenceHandler)
        self.backend = backend if backend is not None else BuiltinBackend()
        self.genre_map = genre_map if genre_map is not None else default_genre_map()
        self._thread: Optional[threading.Thread] = None

    @property
    def base_url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> "ReferenceServer":
        self._thread = threading.Thread(target=self.serve_forever, name="refserver", daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self.shutdown()
        self.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None
