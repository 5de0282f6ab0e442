"""The Rumour Mill: tangible settings in, printer-ready rumour tickets out."""

from rumourmill.backends import BuiltinBackend, GenerationBackend
from rumourmill.cache import CacheKey, CacheStore, cache_key
from rumourmill.controller import MillController
from rumourmill.milling import Provenance, Rumour, generate_rumour, mill_once
from rumourmill.params import (
    ControlSpec,
    DateWindow,
    Genre,
    MillSettings,
    Wackiness,
    WhenSetting,
    build_control_spec,
    pot_to_wackiness,
    wackiness_to_temperature,
    when_to_date_window,
)
from rumourmill.remote import RemoteBackend, RemoteBackendConfig
from rumourmill.ticket import Ticket, encode_escpos, render_ticket, wrap_text

__version__ = "0.1.0"

__all__ = [
    "BuiltinBackend",
    "CacheKey",
    "CacheStore",
    "ControlSpec",
    "DateWindow",
    "GenerationBackend",
    "Genre",
    "MillController",
    "MillSettings",
    "Provenance",
    "RemoteBackend",
    "RemoteBackendConfig",
    "Rumour",
    "Ticket",
    "Wackiness",
    "WhenSetting",
    "build_control_spec",
    "cache_key",
    "encode_escpos",
    "generate_rumour",
    "mill_once",
    "pot_to_wackiness",
    "render_ticket",
    "wackiness_to_temperature",
    "when_to_date_window",
    "wrap_text",
]
