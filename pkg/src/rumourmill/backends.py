"""Generation backend contract and the built-in deterministic backend.

A backend supplies two stages: a headline and a story continuing it.
Identical inputs plus an identically seeded rng must give identical text.
"""

from __future__ import annotations

import random
import threading
from importlib import resources
from pathlib import Path
from typing import Dict, Optional, Protocol, Union

from rumourmill.errors import ConfigMissing
from rumourmill.headlines import generate_headline, load_phrase_lists
from rumourmill.ngram import NgramModel, build_ngram_model, generate_text
from rumourmill.params import ControlSpec, Genre

DEFAULT_STORY_ORDER = 3
DEFAULT_MAX_TOKENS = 120
DEFAULT_STOP_SENTENCES = 4


class GenerationBackend(Protocol):
    """The two-capability contract every backend satisfies."""

    def generate_headline(self, temperature: float, effective_genre: Genre, rng: random.Random) -> str:
        ...

    def generate_story(self, headline: str, spec: ControlSpec, rng: random.Random, max_tokens: int) -> str:
        ...


def load_corpus_documents(genre: Genre, data_dir: Optional[Union[str, Path]] = None) -> list:
    """Paragraphs of the genre corpus file, one document per paragraph."""
    name = f"{genre.slug}.txt"
    if data_dir is not None:
        path = Path(data_dir) / name
        if not path.exists():
            raise ConfigMissing(f"no corpus file for {genre.name} at {path}")
        text = path.read_text(encoding="utf-8")
    else:
        res = resources.files("rumourmill").joinpath(f"data/corpora/{name}")
        if not res.is_file():
            raise ConfigMissing(f"no bundled corpus for {genre.name}")
        text = res.read_text("utf-8")
    return [p.strip() for p in text.split("\n\n") if p.strip()]


class BuiltinBackend:
    """Desk-scale stand-in for the remote models.

    Headlines come from the genre phrase templates, stories from an order-n
    model over the bundled genre corpus. Models build lazily, once per
    genre, and are immutable afterwards.
    """

    def __init__(
        self,
        data_dir: Optional[Union[str, Path]] = None,
        order: int = DEFAULT_STORY_ORDER,
        stop_sentences: int = DEFAULT_STOP_SENTENCES,
    ):
        self._data_dir = data_dir
        self._order = order
        self._stop_sentences = stop_sentences
        self._models: Dict[Genre, NgramModel] = {}
        self._build_lock = threading.Lock()

    def _model(self, genre: Genre) -> NgramModel:
        with self._build_lock:
            model = self._models.get(genre)
            if model is None:
                docs = load_corpus_documents(genre, self._data_dir)
                model = build_ngram_model(docs, self._order, genre)
                self._models[genre] = model
        return model

    def warm(self) -> None:
        """Pre-build every genre model so first millings are not slower."""
        for genre in Genre:
            if genre is not Genre.Random:
                self._model(genre)

    def generate_headline(self, temperature: float, effective_genre: Genre, rng: random.Random) -> str:
        lists = load_phrase_lists(effective_genre, self._data_dir)
        return generate_headline(temperature, effective_genre, rng, lists)

    def generate_story(self, headline: str, spec: ControlSpec, rng: random.Random, max_tokens: int) -> str:
        model = self._model(spec.effective_genre)
        return generate_text(
            model,
            spec.temperature,
            rng,
            max_tokens=max_tokens,
            stop_sentences=self._stop_sentences,
            seed=headline,
        )
