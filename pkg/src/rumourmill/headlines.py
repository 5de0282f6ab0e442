"""Template headline generation from genre-tagged phrase lists.

A headline is one subject, one predicate and one object drawn from the
genre's phrase file (`<genre>.headlines.tsv`, tab-separated columns).
Load-time validation keeps every possible combination within the 4..14
word claim length, so the bound holds by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import List, Optional, Union

from rumourmill.errors import ConfigError, ConfigMissing
from rumourmill.params import Genre
from rumourmill.sampling import temperature_sample

HEADLINE_MIN_WORDS = 4
HEADLINE_MAX_WORDS = 14

_CACHE: dict = {}


@dataclass(frozen=True)
class PhraseLists:
    genre: Genre
    subjects: tuple
    predicates: tuple
    objects: tuple


def _parse_rows(text: str, source: str) -> List[List[str]]:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = [c.strip() for c in line.split("\t")]
        if len(cols) != 3 or not all(cols):
            raise ConfigError(f"{source}:{lineno}: expected 3 tab-separated phrases")
        rows.append(cols)
    if not rows:
        raise ConfigError(f"{source}: no phrase rows")
    return rows


def parse_phrase_lists(text: str, genre: Genre, source: str = "<string>") -> PhraseLists:
    rows = _parse_rows(text, source)
    subjects = tuple(r[0] for r in rows)
    predicates = tuple(r[1] for r in rows)
    objects = tuple(r[2] for r in rows)
    lengths = [[len(p.split()) for p in slot] for slot in (subjects, predicates, objects)]
    shortest = sum(min(l) for l in lengths)
    longest = sum(max(l) for l in lengths)
    if shortest < HEADLINE_MIN_WORDS or longest > HEADLINE_MAX_WORDS:
        raise ConfigError(
            f"{source}: combinations span {shortest}..{longest} words, "
            f"need {HEADLINE_MIN_WORDS}..{HEADLINE_MAX_WORDS}"
        )
    return PhraseLists(genre, subjects, predicates, objects)


def load_phrase_lists(genre: Genre, data_dir: Optional[Union[str, Path]] = None) -> PhraseLists:
    """Load (and cache) the phrase lists for a genre; ConfigMissing if absent."""
    cache_key = (genre, str(data_dir) if data_dir else None)
    if cache_key in _CACHE:
        return _CACHE[cache_key]
    name = f"{genre.slug}.headlines.tsv"
    if data_dir is not None:
        path = Path(data_dir) / name
        if not path.exists():
            raise ConfigMissing(f"no phrase list file for {genre.name} at {path}")
        text = path.read_text(encoding="utf-8")
        source = str(path)
    else:
        res = resources.files("rumourmill").joinpath(f"data/corpora/{name}")
        if not res.is_file():
            raise ConfigMissing(f"no bundled phrase list for {genre.name}")
        text = res.read_text("utf-8")
        source = name
    lists = parse_phrase_lists(text, genre, source=source)
    _CACHE[cache_key] = lists
    return lists


def generate_headline(
    temperature: float,
    effective_genre: Genre,
    rng: random.Random,
    phrase_lists: Optional[PhraseLists] = None,
) -> str:
    """Fill the <subject> <predicate> <object> claim template.

    Slots are drawn independently through the temperature sampler over
    uniform weights; no terminal period, first letter capitalized.
    """
    if effective_genre is Genre.Random:
        raise ValueError("headline generation needs a concrete genre")
    lists = phrase_lists if phrase_lists is not None else load_phrase_lists(effective_genre)
    parts = []
    for slot in (lists.subjects, lists.predicates, lists.objects):
        idx = temperature_sample([1.0] * len(slot), temperature, rng)
        parts.append(slot[idx])
    headline = " ".join(parts)
    return headline[:1].upper() + headline[1:]
