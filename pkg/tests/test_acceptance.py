"""Acceptance suite: one test per criterion, one PASS line per criterion.

Run with output visible to see the per-criterion lines:

    pytest tests/test_acceptance.py -v -s
"""

import math
import random
import statistics
import subprocess
import sys
import time
from collections import Counter
from datetime import date, timedelta

import pytest

from rumourmill.api import MillApiServer
from rumourmill.backends import BuiltinBackend
from rumourmill.cache import CacheStore, full_key_space
from rumourmill.controller import MillController
from rumourmill.errors import BackendUnavailable, ProtocolError
from rumourmill.milling import generate_rumour
from rumourmill.panel import EventKind
from rumourmill.params import (
    CONCRETE_GENRES,
    Genre,
    WhenSetting,
    shift_years,
    when_to_date_window,
)
from rumourmill.refserver import ReferenceServer
from rumourmill.remote import (
    RemoteBackend,
    RemoteBackendConfig,
    remote_generate_headline,
    remote_generate_story,
)
from rumourmill.sampling import distribution_entropy, temperature_probabilities, temperature_sample
from rumourmill.ticket import render_ticket
from tests.conftest import FakeClock, make_settings
from tests.test_remote import SPEC, StubRemote

BACKEND = BuiltinBackend()


def ok(name):
    print(f"\nACCEPTANCE PASS: {name}")


class TestSamplerCorrectness:
    WEIGHTS = ([1, 1], [9, 1], [1, 2, 3, 4], [5, 1, 1, 1, 2])
    TEMPERATURES = (0.2, 1.0, 1.5)
    DRAWS = 100_000

    def test_empirical_frequencies_within_3_sigma(self):
        started = time.perf_counter()
        rng = random.Random(20_2020)
        for weights in self.WEIGHTS:
            for t in self.TEMPERATURES:
                # independent oracle: direct exponentiation
                powered = [w ** (1.0 / t) for w in weights]
                analytic = [p / sum(powered) for p in powered]
                assert abs(sum(temperature_probabilities(weights, t)) - 1.0) < 1e-9
                counts = Counter(temperature_sample(weights, t, rng) for _ in range(self.DRAWS))
                for i, p in enumerate(analytic):
                    sigma = math.sqrt(self.DRAWS * p * (1.0 - p))
                    assert abs(counts[i] - self.DRAWS * p) <= 3.0 * sigma, (weights, t, i)
        elapsed = time.perf_counter() - started
        assert elapsed < 10.0, f"sampler run took {elapsed:.1f}s"
        ok(f"sampler correctness (12 weight/temperature pairs, 100k draws each, {elapsed:.1f}s)")


class TestEntropyMonotonicity:
    def test_entropy_non_decreasing_in_temperature(self):
        rng = random.Random(424242)
        grid = (0.2, 0.5, 1.0, 1.5)
        for _ in range(20):
            weights = [rng.uniform(0.05, 25.0) for _ in range(rng.randint(2, 8))]
            entropies = [distribution_entropy(temperature_probabilities(weights, t)) for t in grid]
            for lo, hi in zip(entropies, entropies[1:]):
                assert hi >= lo - 1e-12, (weights, entropies)
        ok("entropy monotone in temperature (20 weight vectors, T in {0.2, 0.5, 1.0, 1.5})")


class TestDateWindows:
    def test_examples_and_adjacency(self):
        # hand-computed examples for 2020-05-04
        today = date(2020, 5, 4)
        assert when_to_date_window(WhenSetting.Present, today).start == date(2019, 5, 5)
        assert when_to_date_window(WhenSetting.Present, today).end == date(2020, 5, 4)
        assert when_to_date_window(WhenSetting.Past, today).start == date(2009, 5, 5)
        assert when_to_date_window(WhenSetting.Past, today).end == date(2019, 5, 4)
        assert when_to_date_window(WhenSetting.Future, today).start == date(2021, 5, 5)
        assert when_to_date_window(WhenSetting.Future, today).end == date(2022, 5, 4)

        rng = random.Random(3141)
        todays = []
        for leap_day in (date(2016, 2, 29), date(2020, 2, 29), date(2024, 2, 29)):
            for offset in (-2, -1, 0, 1, 2):
                todays.append(leap_day + timedelta(days=offset))
        while len(todays) < 200:
            todays.append(date(1999, 1, 1) + timedelta(days=rng.randrange(12000)))
        for today in todays:
            past = when_to_date_window(WhenSetting.Past, today)
            present = when_to_date_window(WhenSetting.Present, today)
            future = when_to_date_window(WhenSetting.Future, today)
            assert past.end + timedelta(days=1) == present.start
            assert present.end == today
            assert future.start == shift_years(today + timedelta(days=1), 1)
        ok("date windows (exact 2020-05-04 examples; 200 dates incl. Feb-29 neighbourhoods)")


class TestDeterminism:
    def test_mill_once_byte_identical_across_processes(self):
        argv = [
            sys.executable,
            "-m",
            "rumourmill",
            "once",
            "--wackiness", "0.7",
            "--genre", "conspiracy_theory",
            "--when", "past",
            "--seed", "20200504",
            "--now", "2020-05-04T12:00:00",
        ]
        first = subprocess.run(argv, capture_output=True, timeout=60)
        second = subprocess.run(argv, capture_output=True, timeout=60)
        assert first.returncode == 0, first.stderr.decode()
        assert second.returncode == 0, second.stderr.decode()
        assert first.stdout == second.stdout
        assert b"*** RUMOUR ***" in first.stdout
        ok("determinism (two `mill once` process runs are byte-identical)")


class TestOutageResilience:
    N_MILLINGS = 50

    @staticmethod
    def _settings_sequence(rng):
        """50 random (pot, switch, toggle) draws, capped at 4 millings per
        (genre, when) pair so the target-1 cache can always answer."""
        sequence = []
        used = Counter()
        while len(sequence) < TestOutageResilience.N_MILLINGS:
            pot = rng.randrange(1024)
            switch = rng.randrange(1, 12)  # concrete genres only
            toggle = rng.randrange(3)
            pair = (switch, toggle)
            if used[pair] >= 4:
                continue
            used[pair] += 1
            sequence.append((pot, switch, toggle))
        return sequence

    @staticmethod
    def _dial_and_mill(controller, clock, pot, switch, toggle):
        # a visitor takes more than 30 ms per dial change
        clock.advance(1.0)
        controller.submit_event(EventKind.Pot, pot, at=clock.now)
        controller.submit_event(EventKind.Toggle, toggle, at=clock.now)
        clock.advance(0.5)
        controller.submit_event(EventKind.Switch, switch, at=clock.now)
        return controller.mill_now(timeout=30)

    def test_cache_carries_the_mill_through_an_outage(self, tmp_path):
        server = ReferenceServer().start()
        config = RemoteBackendConfig(server.base_url, timeout_ms=5000, retries=1)
        backend = RemoteBackend(config)
        clock = FakeClock()
        controller = MillController(
            backend,
            CacheStore(tmp_path / "cache.journal"),
            tmp_path / "spool",
            clock=clock,
            rng=random.Random(1),
            refill_target=1,
            health_checker=backend.health,
        )
        controller.start(refill=False)
        try:
            cycles = 0
            while controller.cache.refill_plan(1) and cycles < 30:
                controller.run_refill_cycle()
                cycles += 1
            assert controller.cache.total() == 132

            server.stop()
            assert controller.refresh_health() is False

            rng = random.Random(50)
            for pot, switch, toggle in self._settings_sequence(rng):
                record = self._dial_and_mill(controller, clock, pot, switch, toggle)
                assert record.kind == "rumour", record
                assert record.provenance == "cache"
            assert controller.ticket_count() == self.N_MILLINGS
        finally:
            controller.stop()
            controller.cache.close()
        ok("outage resilience (50 millings against a dead remote all served from cache)")

    def test_empty_cache_outage_prints_50_apologies(self, tmp_path):
        config = RemoteBackendConfig("http://127.0.0.1:1", timeout_ms=300, retries=1)
        clock = FakeClock()
        controller = MillController(
            RemoteBackend(config),
            CacheStore(),
            tmp_path / "spool",
            clock=clock,
            rng=random.Random(2),
        )
        controller.start(refill=False)
        try:
            rng = random.Random(51)
            for pot, switch, toggle in self._settings_sequence(rng):
                record = self._dial_and_mill(controller, clock, pot, switch, toggle)
                assert record.kind == "apology"
            assert controller.ticket_count() == self.N_MILLINGS
        finally:
            controller.stop()
        ok("outage resilience (empty cache: 50 apology tickets, zero crashes)")


class TestExactlyOnceTicketing:
    TOTAL_EVENTS = 10_000

    def test_fuzzed_event_stream(self, tmp_path):
        controller = MillController(
            BACKEND,
            CacheStore(),
            tmp_path / "spool",
            clock=FakeClock(),
            rng=random.Random(8),
        )
        controller.start(refill=False)
        clock = FakeClock()
        rng = random.Random(10_000)
        submitted = 0
        full_cranks = 0

        def submit(kind, value):
            nonlocal submitted
            controller.submit_event(kind, value, at=clock.now)
            submitted += 1

        try:
            while submitted < self.TOTAL_EVENTS:
                clock.advance(0.05)
                roll = rng.random()
                remaining = self.TOTAL_EVENTS - submitted
                if roll < 0.35:
                    submit(EventKind.Pot, rng.randrange(1024))
                elif roll < 0.5:
                    submit(EventKind.Switch, rng.randrange(1, 13))
                elif roll < 0.6:
                    submit(EventKind.Toggle, rng.randrange(3))
                elif roll < 0.85 or remaining < 4:
                    # partial crank; the long pause resets the accumulator
                    submit(EventKind.Crank, rng.randrange(-40, 300))
                    clock.advance(5.5)
                else:
                    for _ in range(4):
                        clock.advance(0.3)
                        submit(EventKind.Crank, 90)
                    full_cranks += 1
            controller.drain()
            assert submitted == self.TOTAL_EVENTS
            assert full_cranks > 0
            assert controller.ticket_count() == full_cranks
            assert len(list((tmp_path / "spool").glob("*.txt"))) == full_cranks
        finally:
            controller.stop()
        ok(f"exactly-once ticketing (10,000 fuzzed events, {full_cranks} full cranks, {full_cranks} tickets)")


class TestTicketLabelling:
    N_TICKETS = 1000

    def test_every_ticket_labelled_and_framed(self):
        rng = random.Random(1000)
        clock = FakeClock()
        for _ in range(self.N_TICKETS):
            settings = make_settings(
                rng.randrange(1024) / 1023,
                rng.choice(list(Genre)),
                rng.choice(list(WhenSetting)),
            )
            rumour = generate_rumour(settings, BACKEND, clock, rng)
            ticket = render_ticket(rumour, width=32)
            unwrapped = " ".join(ticket.lines)
            assert "*** RUMOUR ***" in unwrapped
            assert f"wackiness: {settings.wackiness.value:.2f}" in unwrapped
            assert f"genre: {rumour.spec.effective_genre.slug}" in unwrapped
            assert f"when: {settings.when.slug}" in unwrapped
            assert all(len(line) <= 32 for line in ticket.lines)
            assert ticket.escpos.startswith(b"\x1b\x40")
            assert ticket.escpos.endswith(b"\x1d\x56\x01")
        ok("ticket labelling (1,000 tickets marked, settings echoed, frames intact)")


class TestProtocolConformance:
    def test_fault_matrix_and_round_trip(self):
        failures = {
            "timeout": ["slow", "slow"],
            "500": ["500", "500"],
            "malformed": ["garbage"],
        }
        expected = {
            "timeout": BackendUnavailable,
            "refused": BackendUnavailable,
            "500": BackendUnavailable,
            "malformed": ProtocolError,
        }
        for stage in ("headline", "story"):
            for fault, script in failures.items():
                server = StubRemote(script)
                try:
                    with pytest.raises(expected[fault]):
                        if stage == "headline":
                            remote_generate_headline(server.config, 0.85, Genre.Politics, seed=1)
                        else:
                            remote_generate_story(server.config, "H.", SPEC, seed=1)
                finally:
                    server.close()
            refused = RemoteBackendConfig("http://127.0.0.1:1", timeout_ms=200, retries=1)
            with pytest.raises(expected["refused"]):
                if stage == "headline":
                    remote_generate_headline(refused, 0.85, Genre.Politics, seed=1)
                else:
                    remote_generate_story(refused, "H.", SPEC, seed=1)

        server = ReferenceServer().start()
        try:
            config = RemoteBackendConfig(server.base_url, timeout_ms=5000, retries=1)
            for seed in (3, 14, 159):
                remote = remote_generate_headline(config, 0.85, Genre.RussiaToday, seed=seed)
                local = BACKEND.generate_headline(0.85, Genre.RussiaToday, random.Random(seed))
                assert remote == local
                remote_story = remote_generate_story(config, "Claim.", SPEC, seed=seed)
                local_story = BACKEND.generate_story("Claim.", SPEC, random.Random(seed), 120)
                assert remote_story == local_story
        finally:
            server.stop()
        ok("protocol conformance (fault matrix maps to the error taxonomy; round trip deterministic)")


class TestDeskScaleLatency:
    def test_median_milling_under_100ms(self):
        rng = random.Random(9)
        clock = FakeClock()
        BACKEND.warm()
        timings = []
        for i in range(31):
            settings = make_settings(
                rng.random(), rng.choice(CONCRETE_GENRES), rng.choice(list(WhenSetting))
            )
            started = time.perf_counter()
            rumour = generate_rumour(settings, BACKEND, clock, rng)
            render_ticket(rumour)
            timings.append(time.perf_counter() - started)
        median = statistics.median(timings)
        assert median < 0.100, f"median milling took {median * 1000:.1f}ms"
        ok(f"desk-scale latency (median milling {median * 1000:.2f}ms < 100ms)")
