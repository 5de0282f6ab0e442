"""Panel settings and their conversion into generation controls.

The three tangible controls (wackiness pot, genre switch, when toggle)
become a sampling temperature, a genre control code, and a dated Links
control string pointing into the selected time window.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from datetime import date, timedelta
from enum import Enum
from typing import Optional

from rumourmill.errors import OutOfRange

POT_MAX = 1023  # 10-bit ADC

# Sampling temperature span: near-greedy up to noticeably unusual.
T_MIN = 0.2
T_MAX = 1.5


class Genre(Enum):
    """The 12 positions of the genre switch, in physical wheel order."""

    Politics = 1
    ConspiracyTheory = 2
    ScienceNews = 3
    CnnBusiness = 4
    EntertainmentTonight = 5
    DailyMailHealth = 6
    FoxSports = 7
    IndependentWorldNews = 8
    CelebrityGossip = 9
    ChiTweets = 10
    RussiaToday = 11
    Random = 12

    @property
    def slug(self) -> str:
        """Lowercase snake_case name used in files, keys and wire formats."""
        return re.sub(r"(?<!^)(?=[A-Z])", "_", self.name).lower()


CONCRETE_GENRES = tuple(g for g in Genre if g is not Genre.Random)

_GENRE_BY_SLUG = {g.slug: g for g in Genre}


def genre_from_string(text: str) -> Genre:
    """Parse a genre from its slug or member name (case-insensitive)."""
    key = text.strip().lower()
    if key in _GENRE_BY_SLUG:
        return _GENRE_BY_SLUG[key]
    for g in Genre:
        if g.name.lower() == key:
            return g
    raise ValueError(f"unknown genre: {text!r}")


class WhenSetting(Enum):
    """Three-position time toggle."""

    Past = 0
    Present = 1
    Future = 2

    @property
    def slug(self) -> str:
        return self.name.lower()


def when_from_string(text: str) -> WhenSetting:
    key = text.strip().lower()
    for w in WhenSetting:
        if w.name.lower() == key:
            return w
    raise ValueError(f"unknown when setting: {text!r}")


@dataclass(frozen=True)
class Wackiness:
    """Pot position mapped onto [0, 1]; 0 = fully conventional, 1 = maximally wacky."""

    value: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise OutOfRange(f"wackiness {self.value} outside [0, 1]")


@dataclass(frozen=True)
class MillSettings:
    """One full panel reading; every field always has a physical position."""

    wackiness: Wackiness
    genre: Genre
    when: WhenSetting


@dataclass(frozen=True)
class DateWindow:
    """Inclusive calendar date range."""

    start: date
    end: date

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError(f"window start {self.start} after end {self.end}")

    def __contains__(self, d: date) -> bool:
        return self.start <= d <= self.end

    def sample(self, rng: random.Random) -> date:
        """Uniform draw over the window, endpoints included."""
        span = (self.end - self.start).days
        return self.start + timedelta(days=rng.randint(0, span))


@dataclass(frozen=True)
class ControlSpec:
    """Backend-facing conditioning derived from one settings snapshot."""

    temperature: float
    genre_code: str
    links_code: str
    target_date: date
    effective_genre: Genre

    def __post_init__(self) -> None:
        if not T_MIN <= self.temperature <= T_MAX:
            raise ValueError(f"temperature {self.temperature} outside [{T_MIN}, {T_MAX}]")
        if self.effective_genre is Genre.Random:
            raise ValueError("effective_genre must be a concrete genre")


def pot_to_wackiness(raw: int) -> Wackiness:
    """Scale a 10-bit pot reading onto [0, 1]."""
    if not 0 <= raw <= POT_MAX:
        raise OutOfRange(f"pot reading {raw} outside [0, {POT_MAX}]")
    return Wackiness(raw / POT_MAX)


def wackiness_to_temperature(w: Wackiness) -> float:
    """Affine map from wackiness onto the sampling temperature span."""
    return T_MIN + w.value * (T_MAX - T_MIN)


def shift_years(d: date, years: int) -> date:
    """Same month/day shifted by whole years; Feb 29 clamps to Feb 28."""
    try:
        return d.replace(year=d.year + years)
    except ValueError:
        return d.replace(year=d.year + years, day=28)


def when_to_date_window(when: WhenSetting, today: date) -> DateWindow:
    """Time window for the toggle position.

    Present covers the twelve months up to today, Past the decade before
    that window, Future the twelve months starting a year from tomorrow.
    """
    present_start = shift_years(today, -1) + timedelta(days=1)
    if when is WhenSetting.Present:
        return DateWindow(present_start, today)
    if when is WhenSetting.Past:
        return DateWindow(shift_years(present_start, -10), present_start - timedelta(days=1))
    future_start = shift_years(today + timedelta(days=1), 1)
    return DateWindow(future_start, shift_years(future_start, 1) - timedelta(days=1))


def build_control_spec(
    settings: MillSettings,
    today: date,
    rng: random.Random,
    genre_map: Optional["GenreMap"] = None,
) -> ControlSpec:
    """Resolve a settings snapshot into backend conditioning.

    Draw order is fixed for reproducibility: a Random genre resolves first
    (uniform over the 11 concrete genres), then the target date is drawn
    uniformly from the when-window.
    """
    from rumourmill.genremap import GenreMap, default_genre_map

    if genre_map is None:
        genre_map = default_genre_map()
    effective = settings.genre
    if effective is Genre.Random:
        effective = rng.choice(CONCRETE_GENRES)
    window = when_to_date_window(settings.when, today)
    target = window.sample(rng)
    entry = genre_map.entry(effective)
    links = f"Links https://{entry.links_domain}/{target.year:04d}/{target.month:02d}/{target.day:02d}/"
    return ControlSpec(
        temperature=wackiness_to_temperature(settings.wackiness),
        genre_code=entry.code_token,
        links_code=links,
        target_date=target,
        effective_genre=effective,
    )
