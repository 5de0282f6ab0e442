"""The installation controller.

One authoritative owner serializes panel events and milling: events fold
into the panel state, each completed crank snapshots the settings and
queues exactly one milling job, and a single worker turns jobs into
spooled tickets in trigger order. The refill loop keeps the cache stocked
in the background and never blocks the mill path. A visitor always gets a
printout: if both backend and cache come up empty, the worker prints the
apology ticket instead.
"""

from __future__ import annotations

import logging
import queue
import random
import threading
import time
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Callable, Dict, List, Optional, Union

from rumourmill.backends import GenerationBackend
from rumourmill.cache import CacheKey, CacheStore
from rumourmill.errors import BackendError, InvalidEvent, NoRumourAvailable
from rumourmill.genremap import GenreMap
from rumourmill.milling import Rumour, generate_rumour, mill_once
from rumourmill.panel import EventKind, InputEvent, PanelState, apply_event, current_settings
from rumourmill.params import MillSettings, Wackiness
from rumourmill.ticket import DEFAULT_WIDTH, render_apology_ticket, render_ticket, write_spool

logger = logging.getLogger(__name__)

DEFAULT_REFILL_INTERVAL_S = 60.0
DEFAULT_REFILL_TARGET = 4
REFILL_BATCH_PER_CYCLE = 5
DEFAULT_LONG_POLL_S = 25.0


@dataclass(frozen=True)
class TicketRecord:
    """One feed entry: everything the API exposes about a printed ticket."""

    id: str
    lines: tuple
    escpos: bytes
    created_at: datetime
    kind: str  # "rumour" or "apology"
    provenance: Optional[str] = None


class _Job:
    __slots__ = ("settings", "done", "record")

    def __init__(self, settings: MillSettings):
        self.settings = settings
        self.done = threading.Event()
        self.record: Optional[TicketRecord] = None


class MillController:
    """Owns panel state, the milling queue, the ticket feed and the spool."""

    def __init__(
        self,
        backend: GenerationBackend,
        cache: CacheStore,
        spool_dir: Union[str, Path],
        clock: Callable[[], datetime] = datetime.now,
        rng: Optional[random.Random] = None,
        width: int = DEFAULT_WIDTH,
        genre_map: Optional[GenreMap] = None,
        long_poll_max_s: float = DEFAULT_LONG_POLL_S,
        refill_interval_s: float = DEFAULT_REFILL_INTERVAL_S,
        refill_target: int = DEFAULT_REFILL_TARGET,
        health_checker: Optional[Callable[[], bool]] = None,
        health_interval_s: float = 15.0,
    ):
        self.backend = backend
        self.cache = cache
        self.spool_dir = Path(spool_dir)
        self.clock = clock
        self.width = width
        self.genre_map = genre_map
        self.long_poll_max_s = long_poll_max_s
        self.refill_interval_s = refill_interval_s
        self.refill_target = refill_target
        rng = rng if rng is not None else random.Random()
        # worker and refill threads each get their own stream
        self._mill_rng = random.Random(rng.getrandbits(64))
        self._refill_rng = random.Random(rng.getrandbits(64))

        self._panel = PanelState()
        self._panel_lock = threading.Lock()
        self._jobs: "queue.Queue[Optional[_Job]]" = queue.Queue()
        self._worker: Optional[threading.Thread] = None

        self._records: List[TicketRecord] = []
        self._feed_cond = threading.Condition()

        self._health_checker = health_checker
        self._health_interval_s = health_interval_s
        self._backend_up = True if health_checker is None else bool(health_checker())
        self._stop = threading.Event()
        self._refill_thread: Optional[threading.Thread] = None
        self._health_thread: Optional[threading.Thread] = None

    # -- lifecycle ---------------------------------------------------------

    def start(self, refill: bool = True) -> "MillController":
        self._stop.clear()
        self._worker = threading.Thread(target=self._worker_loop, name="mill-worker", daemon=True)
        self._worker.start()
        if refill:
            self._refill_thread = threading.Thread(target=self._refill_loop, name="mill-refill", daemon=True)
            self._refill_thread.start()
        if self._health_checker is not None:
            self._health_thread = threading.Thread(target=self._health_loop, name="mill-health", daemon=True)
            self._health_thread.start()
        return self

    def stop(self) -> None:
        self._stop.set()
        self._jobs.put(None)
        for thread in (self._worker, self._refill_thread, self._health_thread):
            if thread is not None:
                thread.join(timeout=10)
        self._worker = self._refill_thread = self._health_thread = None

    # -- events and milling --------------------------------------------------

    def submit_event(self, kind: Union[EventKind, str], value: int, at: Optional[datetime] = None) -> bool:
        """Fold one input event in; queues a milling when a crank completes."""
        if isinstance(kind, str):
            try:
                kind = EventKind(kind)
            except ValueError:
                raise InvalidEvent(f"unknown event kind {kind!r}") from None
        event = InputEvent(kind, value, at if at is not None else self.clock())
        with self._panel_lock:
            self._panel, trigger = apply_event(self._panel, event)
            if trigger:
                # snapshot under the lock: the ticket echoes the panel as it
                # stood at trigger time, whatever arrives during generation
                self._jobs.put(_Job(current_settings(self._panel)))
        return trigger

    def mill_now(self, timeout: Optional[float] = None) -> TicketRecord:
        """Software trigger, equivalent to one full crank revolution."""
        with self._panel_lock:
            job = _Job(current_settings(self._panel))
        self._jobs.put(job)
        if not job.done.wait(timeout):
            raise TimeoutError("milling did not complete in time")
        assert job.record is not None
        return job.record

    def drain(self) -> None:
        """Block until every queued job has produced a ticket."""
        self._jobs.join()

    def _worker_loop(self) -> None:
        while True:
            job = self._jobs.get()
            try:
                if job is None:
                    return
                job.record = self._mill_to_ticket(job.settings)
                job.done.set()
            except Exception:
                logger.exception("mill worker failed on a job")
                if job is not None:
                    job.done.set()
            finally:
                self._jobs.task_done()

    def _mill_to_ticket(self, settings: MillSettings) -> TicketRecord:
        try:
            rumour = mill_once(settings, self.backend, self.cache, self.clock, self._mill_rng, self.genre_map)
            ticket = render_ticket(rumour, self.width)
            record = TicketRecord(
                ticket.rumour_id, ticket.lines, ticket.escpos, rumour.created_at, "rumour", rumour.provenance.value
            )
        except NoRumourAvailable:
            ticket_id = f"apology-{self._mill_rng.getrandbits(64):016x}"
            now = self.clock()
            ticket = render_apology_ticket(ticket_id, now, self.width)
            record = TicketRecord(ticket_id, ticket.lines, ticket.escpos, now, "apology")
        try:
            write_spool(ticket, self.spool_dir)
        except OSError:
            logger.exception("spool write failed for %s", ticket.rumour_id)
        with self._feed_cond:
            self._records.append(record)
            self._feed_cond.notify_all()
        return record

    # -- feed ----------------------------------------------------------------

    def tickets_since(self, since_id: Optional[str] = None, wait_s: float = 0.0) -> List[TicketRecord]:
        """Feed entries after since_id, long-polling up to wait_s for news.

        An unknown or absent cursor means "from the beginning".
        """
        deadline = time.monotonic() + wait_s

        def newer() -> List[TicketRecord]:
            start = 0
            if since_id is not None:
                for i, record in enumerate(self._records):
                    if record.id == since_id:
                        start = i + 1
                        break
            return self._records[start:]

        with self._feed_cond:
            result = newer()
            while not result and wait_s > 0:
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    break
                self._feed_cond.wait(remaining)
                result = newer()
            return list(result)

    def escpos_for(self, ticket_id: str) -> Optional[bytes]:
        with self._feed_cond:
            for record in self._records:
                if record.id == ticket_id:
                    return record.escpos
        return None

    def ticket_count(self) -> int:
        with self._feed_cond:
            return len(self._records)

    # -- state ---------------------------------------------------------------

    def backend_up(self) -> bool:
        return self._backend_up

    def state_snapshot(self) -> Dict[str, object]:
        with self._panel_lock:
            panel = self._panel
        return {
            "pot": panel.pot_raw,
            "switch": panel.switch_pos,
            "toggle": panel.toggle_pos.slug,
            "crank_deg": panel.crank_accum_deg,
            "backend": "up" if self.backend_up() else "down",
            "cache_counts": {str(key): count for key, count in sorted(
                self.cache.counts().items(), key=lambda kv: str(kv[0])
            )},
        }

    # -- background loops ------------------------------------------------------

    def _health_loop(self) -> None:
        while not self._stop.wait(self._health_interval_s):
            self.refresh_health()

    def refresh_health(self) -> bool:
        if self._health_checker is not None:
            try:
                self._backend_up = bool(self._health_checker())
            except Exception:
                logger.exception("health check raised; treating backend as down")
                self._backend_up = False
        return self._backend_up

    def _refill_loop(self) -> None:
        while not self._stop.wait(self.refill_interval_s):
            try:
                self.run_refill_cycle()
            except Exception:
                logger.exception("refill cycle failed")

    def run_refill_cycle(self, budget: int = REFILL_BATCH_PER_CYCLE) -> int:
        """One refill pass: up to `budget` generation attempts toward the plan.

        Gated on backend health; individual failures are logged and skipped.
        Returns the number of rumours deposited.
        """
        if not self.backend_up():
            return 0
        attempts = deposited = 0
        for key, deficit in self.cache.refill_plan(self.refill_target):
            for _ in range(deficit):
                if attempts >= budget:
                    return deposited
                attempts += 1
                if self._refill_one(key):
                    deposited += 1
        return deposited

    def _refill_one(self, key: CacheKey) -> bool:
        settings = settings_for_key(key)
        try:
            rumour = generate_rumour(settings, self.backend, self.clock, self._refill_rng, self.genre_map)
        except BackendError as exc:
            logger.warning("refill generation failed for %s: %s", key, exc)
            return False
        self.cache.put(key, rumour)
        return True


def settings_for_key(key: CacheKey) -> MillSettings:
    """Representative settings for a cache key: the bucket's midpoint."""
    wackiness = (key.bucket + 0.5) / 4.0
    return MillSettings(Wackiness(wackiness), key.genre, key.when)
