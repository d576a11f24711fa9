"""Shared builders for the test suite: scripted RNGs and view/flow factories."""

from __future__ import annotations

import random

import pytest

from cellsched import FlowSpec, FlowView


class StubRng:
    """random()-compatible stub replaying a scripted list of uniforms."""

    def __init__(self, values):
        self._values = list(values)
        self._i = 0

    def random(self) -> float:
        value = self._values[self._i]
        self._i += 1
        return value


class CountingRng:
    """Wraps a real RNG and counts how many uniforms were consumed."""

    def __init__(self, seed: int = 0):
        self._rng = random.Random(seed)
        self.calls = 0

    def random(self) -> float:
        self.calls += 1
        return self._rng.random()


def make_view(**kwargs) -> FlowView:
    """FlowView with benign defaults, overridable per test."""
    defaults = dict(
        id=0,
        t=10,
        age=5,
        served=50.0,
        buffer=100.0,
        rate=10.0,
        mean_rate_est=10.0,
        true_size=None,
        last_served=None,
    )
    defaults.update(kwargs)
    return FlowView(**defaults)


def make_flow(fid=0, arrival=0, size=100.0, mean_rate=10.0) -> FlowSpec:
    return FlowSpec(id=fid, arrival_slot=arrival, file_size=size, mean_rate=mean_rate)


@pytest.fixture
def stub_rng():
    return StubRng


@pytest.fixture
def counting_rng():
    return CountingRng
