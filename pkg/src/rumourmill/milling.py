"""One milling: settings in, one rumour out, cache kept warm.

The two-stage pipeline runs headline first, then the story seeded with
that headline. A healthy backend deposits a copy of the fresh rumour in
the cache; a failing backend falls back to the cache for the same key.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import random
from dataclasses import dataclass
from datetime import date, datetime
from enum import Enum
from typing import Callable, Optional

from rumourmill.backends import DEFAULT_MAX_TOKENS, GenerationBackend
from rumourmill.errors import BackendError, NoRumourAvailable, PersistenceFailure
from rumourmill.genremap import GenreMap
from rumourmill.params import (
    ControlSpec,
    Genre,
    MillSettings,
    Wackiness,
    WhenSetting,
    build_control_spec,
    genre_from_string,
    when_from_string,
)

logger = logging.getLogger(__name__)

Clock = Callable[[], datetime]


class Provenance(Enum):
    Live = "live"
    Cache = "cache"


@dataclass(frozen=True)
class Rumour:
    """One generated rumour plus everything the ticket needs to echo."""

    id: str
    headline: str
    body: str
    settings: MillSettings
    spec: ControlSpec
    created_at: datetime
    provenance: Provenance

    def __post_init__(self) -> None:
        if not self.headline or not self.body:
            raise ValueError("rumour headline and body must be non-empty")


def story_seed(headline: str) -> str:
    """The verbatim headline, given a trailing period if it lacks one."""
    if headline.endswith((".", "!", "?")):
        return headline
    return headline + "."


def _run_pipeline(
    settings: MillSettings,
    spec: ControlSpec,
    backend: GenerationBackend,
    now: datetime,
    rng: random.Random,
    max_tokens: int,
) -> Rumour:
    rumour_id = f"{rng.getrandbits(128):032x}"
    headline = backend.generate_headline(spec.temperature, spec.effective_genre, rng)
    body = backend.generate_story(story_seed(headline), spec, rng, max_tokens)
    return Rumour(
        id=rumour_id,
        headline=headline,
        body=body,
        settings=settings,
        spec=spec,
        created_at=now,
        provenance=Provenance.Live,
    )


def generate_rumour(
    settings: MillSettings,
    backend: GenerationBackend,
    clock: Clock,
    rng: random.Random,
    genre_map: Optional[GenreMap] = None,
    max_tokens: int = DEFAULT_MAX_TOKENS,
) -> Rumour:
    """Run the two-stage pipeline once against a live backend."""
    now = clock()
    spec = build_control_spec(settings, now.date(), rng, genre_map)
    return _run_pipeline(settings, spec, backend, now, rng, max_tokens)


def mill_once(
    settings: MillSettings,
    backend: GenerationBackend,
    cache,
    clock: Clock,
    rng: random.Random,
    genre_map: Optional[GenreMap] = None,
    max_tokens: int = DEFAULT_MAX_TOKENS,
) -> Rumour:
    """One crank's worth of work: live generation, or the cache during drops.

    A cache-served rumour keeps its stored text but is re-labelled with the
    visitor's settings snapshot, so a ticket always echoes the panel as it
    stood at trigger time. NoRumourAvailable is the only failure callers see.
    """
    from rumourmill.cache import cache_key

    now = clock()
    spec = build_control_spec(settings, now.date(), rng, genre_map)
    key = cache_key(settings, spec.effective_genre)
    try:
        rumour = _run_pipeline(settings, spec, backend, now, rng, max_tokens)
    except BackendError as exc:
        if cache is None:
            raise NoRumourAvailable(f"backend failed ({exc}) and no cache is configured") from exc
        hit = cache.take(key)
        if hit is None:
            raise NoRumourAvailable(f"backend failed ({exc}) and cache empty for {key}") from exc
        logger.info("served rumour %s from cache for %s", hit.id, key)
        return dataclasses.replace(hit, settings=settings, provenance=Provenance.Cache)
    if cache is not None:
        try:
            cache.put(key, rumour)
        except PersistenceFailure:
            logger.warning("cache journal write failed; continuing degraded")
    return rumour


def rumour_to_json(rumour: Rumour) -> str:
    """Canonical JSON blob used by the cache journal."""
    return json.dumps(
        {
            "id": rumour.id,
            "headline": rumour.headline,
            "body": rumour.body,
            "settings": {
                "wackiness": rumour.settings.wackiness.value,
                "genre": rumour.settings.genre.slug,
                "when": rumour.settings.when.slug,
            },
            "spec": {
                "temperature": rumour.spec.temperature,
                "genre_code": rumour.spec.genre_code,
                "links_code": rumour.spec.links_code,
                "target_date": rumour.spec.target_date.isoformat(),
                "effective_genre": rumour.spec.effective_genre.slug,
            },
            "created_at": rumour.created_at.isoformat(),
            "provenance": rumour.provenance.value,
        },
        sort_keys=True,
    )


def rumour_from_json(blob: str) -> Rumour:
    data = json.loads(blob)
    settings = MillSettings(
        wackiness=Wackiness(data["settings"]["wackiness"]),
        genre=genre_from_string(data["settings"]["genre"]),
        when=when_from_string(data["settings"]["when"]),
    )
    spec = ControlSpec(
        temperature=data["spec"]["temperature"],
        genre_code=data["spec"]["genre_code"],
        links_code=data["spec"]["links_code"],
        target_date=date.fromisoformat(data["spec"]["target_date"]),
        effective_genre=genre_from_string(data["spec"]["effective_genre"]),
    )
    return Rumour(
        id=data["id"],
        headline=data["headline"],
        body=data["body"],
        settings=settings,
        spec=spec,
        created_at=datetime.fromisoformat(data["created_at"]),
        provenance=Provenance(data["provenance"]),
    )
