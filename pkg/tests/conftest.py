import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def rand_disk(rng, r):
    while True:
        w = rng.uniform(-r, r) + 1j * rng.uniform(-r, r)
        if abs(w) <= r:
            return w


def circle(samples=64, offset=0.137):
    return np.exp(2j * np.pi * (np.arange(samples) + offset) / samples)
