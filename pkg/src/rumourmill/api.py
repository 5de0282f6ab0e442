"""HTTP API of the mill service.

    GET  /api/state                 panel, backend health, cache counts
    POST /api/events                {"kind": "pot|switch|toggle|crank", "value": int} -> 202
    POST /api/mill                  software trigger -> 201 {"ticket_id": ...}
    GET  /api/tickets?since=<id>    ticket feed, long-poll up to the configured wait
    GET  /api/tickets/<id>/escpos   raw printer bytes

Used by the panel UI and by hardware adapters; everything the UI does goes
through these five routes.
"""

from __future__ import annotations

import json
import logging
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional, Tuple
from urllib.parse import parse_qs, urlparse

from rumourmill.controller import MillController, TicketRecord
from rumourmill.errors import InvalidEvent

logger = logging.getLogger(__name__)


def _record_payload(record: TicketRecord) -> dict:
    return {
        "id": record.id,
        "lines": list(record.lines),
        "created_at": record.created_at.isoformat(timespec="seconds"),
    }


class MillRequestHandler(BaseHTTPRequestHandler):
    server: "MillApiServer"

    def log_message(self, fmt, *args):
        logger.debug("api: " + fmt, *args)

    def _send_json(self, status: int, payload) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _send_bytes(self, payload: bytes) -> None:
        self.send_response(200)
        self.send_header("Content-Type", "application/octet-stream")
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(payload)

    def do_GET(self):
        url = urlparse(self.path)
        controller = self.server.controller
        if url.path == "/api/state":
            self._send_json(200, controller.state_snapshot())
            return
        if url.path == "/api/tickets":
            query = parse_qs(url.query)
            since = query.get("since", [None])[0]
            records = controller.tickets_since(since, wait_s=self.server.long_poll_max_s)
            self._send_json(200, [_record_payload(r) for r in records])
            return
        if url.path.startswith("/api/tickets/") and url.path.endswith("/escpos"):
            ticket_id = url.path[len("/api/tickets/") : -len("/escpos")]
            payload = controller.escpos_for(ticket_id)
            if payload is None:
                self._send_json(404, {"error": f"no ticket {ticket_id}"})
            else:
                self._send_bytes(payload)
            return
        self._send_json(404, {"error": "not found"})

    def do_POST(self):
        url = urlparse(self.path)
        controller = self.server.controller
        if url.path == "/api/events":
            try:
                body = self._read_json()
                kind = body["kind"]
                value = body["value"]
                if not isinstance(kind, str) or not isinstance(value, int) or isinstance(value, bool):
                    raise InvalidEvent("kind must be a string and value an integer")
                controller.submit_event(kind, value)
            except (InvalidEvent, KeyError, ValueError) as exc:
                self._send_json(400, {"error": str(exc) or exc.__class__.__name__})
                return
            self._send_json(202, {})
            return
        if url.path == "/api/mill":
            record = controller.mill_now()
            self._send_json(201, {"ticket_id": record.id})
            return
        self._send_json(404, {"error": "not found"})

    def _read_json(self) -> dict:
        length = int(self.headers.get("Content-Length", "0"))
        body = json.loads(self.rfile.read(length).decode("utf-8"))
        if not isinstance(body, dict):
            raise ValueError("request body must be a JSON object")
        return body


class MillApiServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: Tuple[str, int], controller: MillController, long_poll_max_s: Optional[float] = None):
        super().__init__(address, MillRequestHandler)
        self.controller = controller
        self.long_poll_max_s = controller.long_poll_max_s if long_poll_max_s is None else long_poll_max_s
        self._thread: Optional[threading.Thread] = None

    @property
    def base_url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> "MillApiServer":
        self._thread = threading.Thread(target=self.serve_forever, name="mill-api", daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self.shutdown()
        self.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None
