import json
import random
import threading
import time
from datetime import date
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from rumourmill.backends import BuiltinBackend
from rumourmill.errors import BackendUnavailable, ProtocolError
from rumourmill.milling import mill_once
from rumourmill.params import Genre, build_control_spec
from rumourmill.refserver import ReferenceServer
from rumourmill.remote import (
    RemoteBackend,
    RemoteBackendConfig,
    health,
    remote_generate_headline,
    remote_generate_story,
)
from rumourmill.cache import CacheStore
from tests.conftest import FakeClock, make_settings


class _ScriptedHandler(BaseHTTPRequestHandler):
    """Plays back the server's scripted behaviours, one per request."""

    def log_message(self, fmt, *args):
        pass

    def do_POST(self):
        length = int(self.headers.get("Content-Length", "0"))
        body = json.loads(self.rfile.read(length).decode("utf-8")) if length else {}
        self.server.requests.append((self.path, body))
        behaviour = self.server.script.pop(0) if self.server.script else "ok"
        if behaviour == "slow":
            time.sleep(1.2)
            behaviour = "ok"
        if behaviour == "ok":
            self._reply(200, json.dumps({"text": "X"}))
        elif behaviour == "echo":
            self._reply(200, json.dumps({"text": f"echo: {body.get('headline', '')}"}))
        elif behaviour == "garbage":
            self._reply(200, "this is not json {")
        elif behaviour == "notext":
            self._reply(200, json.dumps({"status": "fine"}))
        elif behaviour == "500":
            self._reply(500, json.dumps({"error": "boom"}))
        elif behaviour == "404":
            self._reply(404, json.dumps({"error": "nope"}))
        else:
            raise AssertionError(f"unknown behaviour {behaviour}")

    def do_GET(self):
        behaviour = self.server.script.pop(0) if self.server.script else "ok"
        if behaviour == "ok":
            self._reply(200, json.dumps({"status": "ok"}))
        else:
            self._reply(500, json.dumps({"error": "down"}))

    def _reply(self, status, text):
        payload = text.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)


class StubRemote(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, script=()):
        super().__init__(("127.0.0.1", 0), _ScriptedHandler)
        self.script = list(script)
        self.requests = []
        self._thread = threading.Thread(target=self.serve_forever, daemon=True)
        self._thread.start()

    @property
    def config(self):
        host, port = self.server_address[:2]
        return RemoteBackendConfig(f"http://{host}:{port}", timeout_ms=300, retries=1)

    def close(self):
        self.shutdown()
        self.server_close()


@pytest.fixture
def stub():
    servers = []

    def factory(script=()):
        server = StubRemote(script)
        servers.append(server)
        return server

    yield factory
    for server in servers:
        server.close()


SPEC = build_control_spec(make_settings(), date(2020, 5, 4), random.Random(0))


class TestHeadlineClient:
    def test_passes_text_through(self, stub):
        server = stub(["ok"])
        assert remote_generate_headline(server.config, 0.85, Genre.Politics, seed=7) == "X"

    def test_request_carries_seed_verbatim(self, stub):
        server = stub(["ok"])
        remote_generate_headline(server.config, 0.85, Genre.FoxSports, seed=123456789)
        path, body = server.requests[0]
        assert path == "/v1/headline"
        assert body == {"temperature": 0.85, "genre": "fox_sports", "seed": 123456789}

    def test_timeout_twice_exhausts_retries(self, stub):
        server = stub(["slow", "slow"])
        with pytest.raises(BackendUnavailable):
            remote_generate_headline(server.config, 0.85, Genre.Politics, seed=1)

    def test_5xx_then_ok_retries_once(self, stub):
        server = stub(["500", "ok"])
        assert remote_generate_headline(server.config, 0.85, Genre.Politics, seed=1) == "X"
        assert len(server.requests) == 2

    def test_404_means_unavailable_without_retry(self, stub):
        server = stub(["404"])
        with pytest.raises(BackendUnavailable):
            remote_generate_headline(server.config, 0.85, Genre.Politics, seed=1)
        assert len(server.requests) == 1

    def test_garbage_body_is_protocol_error(self, stub):
        server = stub(["garbage"])
        with pytest.raises(ProtocolError):
            remote_generate_headline(server.config, 0.85, Genre.Politics, seed=1)

    def test_missing_text_field_is_protocol_error(self, stub):
        server = stub(["notext"])
        with pytest.raises(ProtocolError):
            remote_generate_headline(server.config, 0.85, Genre.Politics, seed=1)

    def test_connection_refused_is_unavailable(self):
        config = RemoteBackendConfig("http://127.0.0.1:1", timeout_ms=300, retries=0)
        with pytest.raises(BackendUnavailable):
            remote_generate_headline(config, 0.85, Genre.Politics, seed=1)


class TestStoryClient:
    def test_echo_contains_headline_verbatim(self, stub):
        server = stub(["echo"])
        text = remote_generate_story(server.config, "The claim stands.", SPEC, seed=5)
        assert "The claim stands." in text

    def test_request_carries_control_fields(self, stub):
        server = stub(["ok"])
        remote_generate_story(server.config, "H.", SPEC, seed=42)
        _, body = server.requests[0]
        assert body["headline"] == "H."
        assert body["temperature"] == SPEC.temperature
        assert body["genre_code"] == SPEC.genre_code
        assert body["links_code"] == SPEC.links_code
        assert body["seed"] == 42

    def test_empty_headline_rejected_client_side(self, stub):
        server = stub(["ok"])
        with pytest.raises(ValueError):
            remote_generate_story(server.config, "", SPEC, seed=1)

    def test_404_is_unavailable(self, stub):
        server = stub(["404"])
        with pytest.raises(BackendUnavailable):
            remote_generate_story(server.config, "H.", SPEC, seed=1)

    def test_missing_text_is_protocol_error(self, stub):
        server = stub(["notext"])
        with pytest.raises(ProtocolError):
            remote_generate_story(server.config, "H.", SPEC, seed=1)


class TestHealth:
    def test_responsive_is_up(self, stub):
        assert health(stub(["ok"]).config) is True

    def test_no_listener_is_down(self):
        assert health(RemoteBackendConfig("http://127.0.0.1:1")) is False

    def test_500_is_down(self, stub):
        assert health(stub(["500"]).config) is False


class TestFaultMatrix:
    """Every transport condition maps onto exactly one declared error."""

    @pytest.mark.parametrize("stage", ["headline", "story"])
    @pytest.mark.parametrize(
        "script,expected",
        [
            (["slow", "slow"], BackendUnavailable),
            (["500", "500"], BackendUnavailable),
            (["garbage"], ProtocolError),
            (["notext"], ProtocolError),
        ],
    )
    def test_injected_faults(self, stub, stage, script, expected):
        server = stub(script)
        with pytest.raises(expected):
            if stage == "headline":
                remote_generate_headline(server.config, 0.85, Genre.Politics, seed=1)
            else:
                remote_generate_story(server.config, "H.", SPEC, seed=1)

    @pytest.mark.parametrize("stage", ["headline", "story"])
    def test_refused_connection(self, stage):
        config = RemoteBackendConfig("http://127.0.0.1:1", timeout_ms=200, retries=1)
        with pytest.raises(BackendUnavailable):
            if stage == "headline":
                remote_generate_headline(config, 0.85, Genre.Politics, seed=1)
            else:
                remote_generate_story(config, "H.", SPEC, seed=1)


@pytest.fixture(scope="module")
def reference_config():
    server = ReferenceServer().start()
    yield RemoteBackendConfig(server.base_url, timeout_ms=5000, retries=1)
    server.stop()


class TestReferenceServer:
    @pytest.fixture
    def config(self, reference_config):
        return reference_config

    def test_health(self, config):
        assert health(config) is True

    def test_headline_round_trip_matches_builtin(self, config):
        builtin = BuiltinBackend()
        for seed in (1, 7, 99):
            remote_text = remote_generate_headline(config, 0.85, Genre.ChiTweets, seed=seed)
            local_text = builtin.generate_headline(0.85, Genre.ChiTweets, random.Random(seed))
            assert remote_text == local_text

    def test_story_round_trip_matches_builtin(self, config):
        builtin = BuiltinBackend()
        remote_text = remote_generate_story(config, "Stub claim.", SPEC, seed=11)
        local_text = builtin.generate_story("Stub claim.", SPEC, random.Random(11), 120)
        assert remote_text == local_text

    def test_bad_genre_is_client_error(self, config):
        with pytest.raises(BackendUnavailable):
            remote_generate_headline(config, 0.85, Genre.Random, seed=1)

    def test_full_milling_over_the_wire(self, config):
        backend = RemoteBackend(config)
        rumour = mill_once(make_settings(), backend, CacheStore(), FakeClock(), random.Random(31))
        assert rumour.headline and rumour.body
