import random
from datetime import datetime, timedelta

import pytest

from rumourmill.errors import BackendUnavailable
from rumourmill.params import Genre, MillSettings, Wackiness, WhenSetting


def make_settings(wackiness=0.5, genre=Genre.Politics, when=WhenSetting.Present):
    return MillSettings(Wackiness(wackiness), genre, when)


class FakeClock:
    """Deterministic clock; advances only when told to."""

    def __init__(self, start="2020-05-04T12:00:00"):
        self.now = datetime.fromisoformat(start) if isinstance(start, str) else start

    def __call__(self):
        return self.now

    def advance(self, seconds):
        self.now = self.now + timedelta(seconds=seconds)


class StubBackend:
    """Fixed-output backend for plumbing tests."""

    def __init__(self, headline="Stub headline about things", body="Stub body. It ends."):
        self.headline = headline
        self.body = body
        self.story_seeds = []

    def generate_headline(self, temperature, effective_genre, rng):
        return self.headline

    def generate_story(self, headline, spec, rng, max_tokens):
        self.story_seeds.append(headline)
        return self.body


class FailingBackend:
    """Backend that is always down."""

    def generate_headline(self, temperature, effective_genre, rng):
        raise BackendUnavailable("stubbed outage")

    def generate_story(self, headline, spec, rng, max_tokens):
        raise BackendUnavailable("stubbed outage")


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def clock():
    return FakeClock()
