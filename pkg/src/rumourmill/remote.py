"""HTTP client for the remote generation service.

Wire protocol (UTF-8 JSON bodies):

    POST /v1/headline  {"temperature": number, "genre": string, "seed": integer}
    POST /v1/story     {"headline": string, "temperature": number,
                        "genre_code": string, "links_code": string, "seed": integer}
    GET  /v1/health    -> 200 {"status": "ok"}

Every transport condition maps onto exactly two error values:
BackendUnavailable (timeout, refused, HTTP error after retries) and
ProtocolError (answered, but not in the agreed shape). The explicit seed
field makes a deterministic remote reproducible end to end.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass

import requests

from rumourmill.errors import BackendUnavailable, ProtocolError
from rumourmill.params import ControlSpec, Genre

logger = logging.getLogger(__name__)

HEALTH_TIMEOUT_S = 1.0


@dataclass(frozen=True)
class RemoteBackendConfig:
    base_url: str
    timeout_ms: int = 8000
    retries: int = 1
    health_interval_ms: int = 15000

    def __post_init__(self) -> None:
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be > 0")
        if self.retries < 0:
            raise ValueError("retries must be >= 0")


def _post_for_text(config: RemoteBackendConfig, path: str, payload: dict) -> str:
    url = config.base_url.rstrip("/") + path
    timeout = config.timeout_ms / 1000.0
    last_error = None
    for attempt in range(config.retries + 1):
        try:
            response = requests.post(url, json=payload, timeout=timeout)
        except (requests.Timeout, requests.ConnectionError) as exc:
            last_error = f"transport failure: {exc.__class__.__name__}"
            logger.warning("%s %s (attempt %d/%d)", path, last_error, attempt + 1, config.retries + 1)
            continue
        if 500 <= response.status_code < 600:
            last_error = f"server error {response.status_code}"
            logger.warning("%s %s (attempt %d/%d)", path, last_error, attempt + 1, config.retries + 1)
            continue
        if response.status_code != 200:
            raise BackendUnavailable(f"{path} returned {response.status_code}")
        try:
            body = response.json()
        except ValueError as exc:
            raise ProtocolError(f"{path} returned a non-JSON body") from exc
        text = body.get("text") if isinstance(body, dict) else None
        if not isinstance(text, str) or not text:
            raise ProtocolError(f"{path} response lacks a non-empty 'text' field")
        return text
    raise BackendUnavailable(f"{path} failed after {config.retries + 1} attempt(s): {last_error}")


def remote_generate_headline(
    config: RemoteBackendConfig, temperature: float, effective_genre: Genre, seed: int
) -> str:
    payload = {"temperature": temperature, "genre": effective_genre.slug, "seed": seed}
    return _post_for_text(config, "/v1/headline", payload)


def remote_generate_story(config: RemoteBackendConfig, headline: str, spec: ControlSpec, seed: int) -> str:
    if not headline:
        raise ValueError("headline must be non-empty")
    payload = {
        "headline": headline,
        "temperature": spec.temperature,
        "genre_code": spec.genre_code,
        "links_code": spec.links_code,
        "seed": seed,
    }
    return _post_for_text(config, "/v1/story", payload)


def health(config: RemoteBackendConfig) -> bool:
    """True iff the health endpoint answers 200 within a short timeout."""
    url = config.base_url.rstrip("/") + "/v1/health"
    try:
        return requests.get(url, timeout=HEALTH_TIMEOUT_S).status_code == 200
    except requests.RequestException:
        return False


class RemoteBackend:
    """GenerationBackend adapter over the wire protocol.

    Each stage draws a 32-bit seed from the caller's rng and forwards it
    verbatim, so a fixed local seed still pins down the whole milling when
    the remote is deterministic.
    """

    def __init__(self, config: RemoteBackendConfig):
        self.config = config

    def generate_headline(self, temperature: float, effective_genre: Genre, rng: random.Random) -> str:
        return remote_generate_headline(self.config, temperature, effective_genre, rng.getrandbits(32))

    def generate_story(self, headline: str, spec: ControlSpec, rng: random.Random, max_tokens: int) -> str:
        # story length is the server's policy; max_tokens is not on the wire
        return remote_generate_story(self.config, headline, spec, rng.getrandbits(32))

    def health(self) -> bool:
        return health(self.config)
