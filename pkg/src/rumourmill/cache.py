"""Local rumour cache that keeps the mill serving through network drops.

Keyed by (genre, when, wackiness bucket); per-key FIFO queues with
capacity eviction and nearest-bucket fallback on take. State persists as
an append-only journal of PUT/TAKE lines, compacted whenever it is loaded,
so a crash mid-write can lose at most the trailing partial line.
"""

from __future__ import annotations

import base64
import logging
import math
import os
import threading
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Deque, Dict, List, Optional, Tuple, Union

from rumourmill.errors import JournalError, PersistenceFailure
from rumourmill.milling import Rumour, rumour_from_json, rumour_to_json
from rumourmill.params import CONCRETE_GENRES, Genre, MillSettings, WhenSetting, genre_from_string, when_from_string

logger = logging.getLogger(__name__)

BUCKETS = 4
DEFAULT_CAPACITY = 8


def wackiness_bucket(value: float) -> int:
    """floor(wackiness * 4), with 1.0 clamped into the top bucket."""
    return min(BUCKETS - 1, math.floor(value * BUCKETS))


@dataclass(frozen=True)
class CacheKey:
    genre: Genre
    when: WhenSetting
    bucket: int

    def __post_init__(self) -> None:
        if self.genre is Genre.Random:
            raise ValueError("cache keys use concrete genres only")
        if not 0 <= self.bucket < BUCKETS:
            raise ValueError(f"bucket {self.bucket} outside 0..{BUCKETS - 1}")

    def __str__(self) -> str:
        return f"{self.genre.slug}:{self.when.slug}:{self.bucket}"

    @classmethod
    def parse(cls, text: str) -> "CacheKey":
        try:
            genre_s, when_s, bucket_s = text.split(":")
            return cls(genre_from_string(genre_s), when_from_string(when_s), int(bucket_s))
        except (ValueError, KeyError) as exc:
            raise JournalError(f"bad cache key {text!r}") from exc


def cache_key(settings: MillSettings, effective_genre: Genre) -> CacheKey:
    return CacheKey(effective_genre, settings.when, wackiness_bucket(settings.wackiness.value))


def full_key_space() -> List[CacheKey]:
    """All 132 keys in canonical order: genre wheel, when, bucket."""
    return [
        CacheKey(genre, when, bucket)
        for genre in CONCRETE_GENRES
        for when in WhenSetting
        for bucket in range(BUCKETS)
    ]


def _sort_key(key: CacheKey) -> Tuple[int, int, int]:
    return (key.genre.value, key.when.value, key.bucket)


class CacheStore:
    """Single-writer rumour store; all mutations serialize on one lock.

    With a path, every mutation appends a journal line; without one the
    store is memory-only (handy for tests and one-shot CLI runs).
    """

    def __init__(self, path: Optional[Union[str, Path]] = None, capacity: int = DEFAULT_CAPACITY):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self.degraded = False
        self._queues: Dict[CacheKey, Deque[Rumour]] = {}
        self._lock = threading.RLock()
        self._path = Path(path) if path is not None else None
        self._journal = None
        if self._path is not None:
            self._load_and_compact()

    # -- journal ----------------------------------------------------------

    def _load_and_compact(self) -> None:
        assert self._path is not None
        if self._path.exists():
            with self._path.open("r", encoding="utf-8") as fh:
                for lineno, raw in enumerate(fh, start=1):
                    line = raw.rstrip("\n")
                    if not line:
                        continue
                    self._replay(line, lineno)
        self._path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self._path.with_suffix(self._path.suffix + ".compact")
        with tmp.open("w", encoding="utf-8") as fh:
            for key in sorted(self._queues, key=_sort_key):
                for rumour in self._queues[key]:
                    fh.write(self._put_line(key, rumour))
        os.replace(tmp, self._path)
        self._journal = self._path.open("a", encoding="utf-8")

    def _replay(self, line: str, lineno: int) -> None:
        fields = line.split(" ")
        if len(fields) != 3:
            raise JournalError(f"{self._path}:{lineno}: expected 3 fields")
        op, key_s, payload = fields
        key = CacheKey.parse(key_s)
        if op == "PUT":
            try:
                blob = base64.b64decode(payload.encode("ascii"), validate=True).decode("utf-8")
                rumour = rumour_from_json(blob)
            except Exception as exc:
                raise JournalError(f"{self._path}:{lineno}: bad rumour blob") from exc
            self._apply_put(key, rumour)
        elif op == "TAKE":
            queue = self._queues.get(key)
            if not queue or queue[0].id != payload:
                raise JournalError(f"{self._path}:{lineno}: TAKE does not match queue head")
            queue.popleft()
        else:
            raise JournalError(f"{self._path}:{lineno}: unknown record {op!r}")

    @staticmethod
    def _put_line(key: CacheKey, rumour: Rumour) -> str:
        blob = base64.b64encode(rumour_to_json(rumour).encode("utf-8")).decode("ascii")
        return f"PUT {key} {blob}\n"

    def _append(self, line: str) -> None:
        if self._journal is None:
            return
        self._journal.write(line)
        self._journal.flush()

    # -- operations -------------------------------------------------------

    def _apply_put(self, key: CacheKey, rumour: Rumour) -> None:
        queue = self._queues.setdefault(key, deque())
        queue.append(rumour)
        if len(queue) > self.capacity:
            evicted = queue.popleft()
            logger.debug("evicted %s from %s", evicted.id, key)

    def put(self, key: CacheKey, rumour: Rumour) -> None:
        """Append to the key's queue, evicting the oldest entry over capacity."""
        with self._lock:
            self._apply_put(key, rumour)
            try:
                self._append(self._put_line(key, rumour))
            except OSError as exc:
                self.degraded = True
                raise PersistenceFailure(f"journal append failed: {exc}") from exc

    def take(self, key: CacheKey) -> Optional[Rumour]:
        """Pop the oldest rumour for the key, or the nearest bucket's.

        Fallback stays within the same (genre, when); candidates are tried
        by bucket distance, ties toward the lower bucket. None only when
        all four buckets are empty.
        """
        with self._lock:
            for bucket in sorted(range(BUCKETS), key=lambda b: (abs(b - key.bucket), b)):
                candidate = CacheKey(key.genre, key.when, bucket)
                queue = self._queues.get(candidate)
                if queue:
                    rumour = queue.popleft()
                    try:
                        self._append(f"TAKE {candidate} {rumour.id}\n")
                    except OSError:
                        self.degraded = True
                        logger.warning("journal append failed during take; continuing degraded")
                    return rumour
            return None

    def refill_plan(self, target: int) -> List[Tuple[CacheKey, int]]:
        """Keys below target with their deficits, neediest first."""
        if target > self.capacity:
            raise ValueError(f"target {target} exceeds capacity {self.capacity}")
        with self._lock:
            plan = []
            for index, key in enumerate(full_key_space()):
                have = len(self._queues.get(key, ()))
                if have < target:
                    plan.append((key, target - have, index))
        plan.sort(key=lambda entry: (-entry[1], entry[2]))
        return [(key, deficit) for key, deficit, _ in plan]

    def counts(self) -> Dict[CacheKey, int]:
        """Snapshot of non-empty queue lengths."""
        with self._lock:
            return {key: len(q) for key, q in self._queues.items() if q}

    def total(self) -> int:
        with self._lock:
            return sum(len(q) for q in self._queues.values())

    def close(self) -> None:
        with self._lock:
            if self._journal is not None:
                self._journal.close()
                self._journal = None

    def __enter__(self) -> "CacheStore":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
