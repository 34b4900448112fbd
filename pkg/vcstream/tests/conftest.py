"""Shared fixtures for the vcstream test suite"""

import os

import numpy as np
import pytest

from vcstream.config.config import reload_config
from vcstream.core import Config, Edge
from vcstream.utils.run_tracker import get_run_tracker


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def make_config():
    """Config factory with desk-scale defaults"""
    def _make(n=12, k=2, **overrides):
        return Config(n=n, k=k, **overrides)
    return _make


@pytest.fixture
def triangle():
    return [Edge(1, 2), Edge(2, 3), Edge(1, 3)]


@pytest.fixture
def cycle5():
    return [Edge(1, 2), Edge(2, 3), Edge(3, 4), Edge(4, 5), Edge(1, 5)]


@pytest.fixture
def complete4():
    return [Edge(u, v) for u in range(1, 5) for v in range(u + 1, 5)]


@pytest.fixture
def tracker():
    """Global RunTracker, emptied before and after the test"""
    run_tracker = get_run_tracker()
    run_tracker.reset()
    yield run_tracker
    run_tracker.reset()


@pytest.fixture
def clean_env(monkeypatch):
    """No VCSTREAM_* variables leak in from the calling shell"""
    for name in list(os.environ):
        if name.startswith("VCSTREAM_"):
            monkeypatch.delenv(name, raising=False)
    return monkeypatch


@pytest.fixture
def fresh_config(clean_env):
    """Reload the global ConfigManager from the shipped YAML"""
    manager = reload_config()
    yield manager
    reload_config()
