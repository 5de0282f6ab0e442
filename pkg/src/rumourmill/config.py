"""Service configuration file (JSON) and wiring helpers."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple, Union

from rumourmill.backends import BuiltinBackend
from rumourmill.cache import DEFAULT_CAPACITY, CacheStore
from rumourmill.controller import DEFAULT_LONG_POLL_S, DEFAULT_REFILL_INTERVAL_S, DEFAULT_REFILL_TARGET, MillController
from rumourmill.errors import ConfigError
from rumourmill.genremap import GenreMap, default_genre_map, load_genre_map
from rumourmill.remote import RemoteBackend, RemoteBackendConfig
from rumourmill.ticket import DEFAULT_WIDTH


@dataclass
class ServiceConfig:
    listen: str = "127.0.0.1:8752"
    backend: str = "builtin"
    remote: Optional[RemoteBackendConfig] = None
    cache_path: Optional[str] = "var/cache.journal"
    cache_capacity: int = DEFAULT_CAPACITY
    spool_dir: str = "var/spool"
    printer_width: int = DEFAULT_WIDTH
    genre_map_path: Optional[str] = None
    refill_interval_s: float = DEFAULT_REFILL_INTERVAL_S
    refill_target: int = DEFAULT_REFILL_TARGET
    long_poll_s: float = DEFAULT_LONG_POLL_S

    def listen_address(self) -> Tuple[str, int]:
        host, _, port = self.listen.rpartition(":")
        if not host or not port.isdigit():
            raise ConfigError(f"listen address {self.listen!r} is not host:port")
        return host, int(port)

    def load_genre_map(self) -> GenreMap:
        if self.genre_map_path is None:
            return default_genre_map()
        return load_genre_map(self.genre_map_path)


_KNOWN_KEYS = {"listen", "backend", "remote", "cache", "spool_dir", "printer", "genre_map", "refill", "long_poll_s"}


def load_config(path: Union[str, Path]) -> ServiceConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file {path} does not exist") from None
    except ValueError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")

    config = ServiceConfig()
    config.listen = raw.get("listen", config.listen)
    config.backend = raw.get("backend", config.backend)
    if config.backend not in ("builtin", "remote"):
        raise ConfigError(f"{path}: backend must be 'builtin' or 'remote'")
    if "remote" in raw:
        r = raw["remote"]
        try:
            config.remote = RemoteBackendConfig(
                base_url=r["base_url"],
                timeout_ms=r.get("timeout_ms", 8000),
                retries=r.get("retries", 1),
                health_interval_ms=r.get("health_interval_ms", 15000),
            )
        except (TypeError, KeyError, ValueError) as exc:
            raise ConfigError(f"{path}: bad remote section: {exc}") from None
    if config.backend == "remote" and config.remote is None:
        raise ConfigError(f"{path}: backend 'remote' needs a remote section")
    cache = raw.get("cache", {})
    config.cache_path = cache.get("path", config.cache_path)
    config.cache_capacity = cache.get("capacity", config.cache_capacity)
    config.spool_dir = raw.get("spool_dir", config.spool_dir)
    config.printer_width = raw.get("printer", {}).get("width", config.printer_width)
    config.genre_map_path = raw.get("genre_map", config.genre_map_path)
    refill = raw.get("refill", {})
    config.refill_interval_s = refill.get("interval_s", config.refill_interval_s)
    config.refill_target = refill.get("target", config.refill_target)
    config.long_poll_s = raw.get("long_poll_s", config.long_poll_s)
    return config


def make_backend(config: ServiceConfig):
    """Backend plus its health checker (None means always up)."""
    if config.backend == "remote":
        assert config.remote is not None
        backend = RemoteBackend(config.remote)
        return backend, backend.health
    return BuiltinBackend(), None


def make_controller(config: ServiceConfig, rng: Optional[random.Random] = None) -> MillController:
    backend, health_checker = make_backend(config)
    cache = CacheStore(config.cache_path, capacity=config.cache_capacity)
    health_interval = (config.remote.health_interval_ms / 1000.0) if config.remote else 15.0
    return MillController(
        backend,
        cache,
        config.spool_dir,
        rng=rng,
        width=config.printer_width,
        genre_map=config.load_genre_map(),
        long_poll_max_s=config.long_poll_s,
        refill_interval_s=config.refill_interval_s,
        refill_target=config.refill_target,
        health_checker=health_checker,
        health_interval_s=health_interval,
    )
