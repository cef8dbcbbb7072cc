"""Shared fixtures for the toolkit test suites."""

from pathlib import Path

import numpy as np
import pytest

from src.models.simulation import LevelSpec, LightTailFamily, LightTailSpec, SimConfig
from src.models.trace import SessionBitmap

TESTS_DIR = Path(__file__).parent


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def white_noise(rng) -> np.ndarray:
    """2^10 i.i.d. exponential values"""
    return rng.exponential(1.0, 2 ** 10)


@pytest.fixture
def periodic_session() -> SessionBitmap:
    """20 periods of sixteen 1s followed by four 0s"""
    period = np.concatenate([np.ones(16), np.zeros(4)]).astype(np.uint8)
    return SessionBitmap(bits=np.tile(period, 20))


@pytest.fixture
def constant_levels():
    """One level with constant 8-bin 1-intervals and 8-bin 0-intervals"""
    return [
        LevelSpec(on_mean=8, off_mean=8, family=LightTailFamily.CONSTANT),
    ]


@pytest.fixture
def small_sim_config() -> SimConfig:
    return SimConfig(model="model_a", users=4, bins_log2=10, seed=11, off=LightTailSpec(mean=5.0))


@pytest.fixture
def levels_yaml() -> str:
    return str(TESTS_DIR / "levels.yaml")


@pytest.fixture
def model_a_env() -> str:
    return str(TESTS_DIR / "model_a.conf")
