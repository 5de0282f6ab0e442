"""Genre mapping configuration.

Each concrete genre maps to the code token sent to the story backend and
the domain embedded in the dated Links control string. The mapping is a
plain text file so installations can re-tune it without code changes:

    # comment
    <GenreName> = <code_token> , <links_domain>
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Dict, Union

from rumourmill.errors import ConfigError, ConfigMissing
from rumourmill.params import Genre

logger = logging.getLogger(__name__)

_DEFAULT_MAP = None


@dataclass(frozen=True)
class GenreEntry:
    code_token: str
    links_domain: str


class GenreMap:
    """Immutable lookup from concrete genre to its backend conditioning."""

    def __init__(self, entries: Dict[Genre, GenreEntry]):
        self._entries = dict(entries)

    def entry(self, genre: Genre) -> GenreEntry:
        try:
            return self._entries[genre]
        except KeyError:
            raise ConfigMissing(f"no genre mapping entry for {genre.name}") from None

    def genre_for_code(self, code_token: str) -> Genre:
        """Reverse lookup used by the reference server."""
        for genre, entry in self._entries.items():
            if entry.code_token == code_token:
                return genre
        raise ConfigMissing(f"no genre maps to code token {code_token!r}")

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, genre: Genre) -> bool:
        return genre in self._entries


def parse_genre_map(text: str, source: str = "<string>") -> GenreMap:
    entries: Dict[Genre, GenreEntry] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected '<GenreName> = <code> , <domain>'")
        name, _, rest = line.partition("=")
        name = name.strip()
        try:
            genre = Genre[name]
        except KeyError:
            raise ConfigError(f"{source}:{lineno}: unknown genre name {name!r}") from None
        code, sep, domain = rest.partition(",")
        code, domain = code.strip(), domain.strip()
        if not sep or not code or not domain:
            raise ConfigError(f"{source}:{lineno}: expected '<code_token> , <links_domain>'")
        if genre in entries:
            raise ConfigError(f"{source}:{lineno}: duplicate entry for {name}")
        entries[genre] = GenreEntry(code, domain)
    return GenreMap(entries)


def load_genre_map(path: Union[str, Path]) -> GenreMap:
    """Load a mapping file; unknown genre names or bad lines fail the load."""
    path = Path(path)
    return parse_genre_map(path.read_text(encoding="utf-8"), source=str(path))


def default_genre_map() -> GenreMap:
    """The mapping shipped with the package, parsed once and cached."""
    global _DEFAULT_MAP
    if _DEFAULT_MAP is None:
        text = resources.files("rumourmill").joinpath("data/genres.cfg").read_text("utf-8")
        _DEFAULT_MAP = parse_genre_map(text, source="data/genres.cfg")
    return _DEFAULT_MAP
