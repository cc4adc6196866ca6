"""Shared fixtures: parameter sets, a seeded RNG and brute-force lattice oracles."""

import random

import pytest

from torus_ech.core.exact import PerturbedValue
from torus_ech.core.orbits import FibrationParams, ReebCurrent

SEED = 20240917

SMALL_Q = [3, 5, 7]
ALL_Q = list(range(3, 32, 2))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(SEED)


@pytest.fixture
def q3() -> FibrationParams:
    return FibrationParams(3)


@pytest.fixture
def q5() -> FibrationParams:
    return FibrationParams(5)


@pytest.fixture
def q7() -> FibrationParams:
    return FibrationParams(7)


@pytest.fixture(params=SMALL_Q, ids=lambda q: f"q={q}")
def params(request) -> FibrationParams:
    return FibrationParams(request.param)


def _brute_staircase(a, b, count: int) -> list[tuple[PerturbedValue, int, int]]:
    """First `count` of all a*m + b*n over a box, sorted by (value, m, n).

    Any point with m >= count or n >= count lies above the count points on an axis, so the
    box [0, count)^2 holds every entry.
    """
    a = PerturbedValue.coerce(a)
    b = PerturbedValue.coerce(b)
    points = [(a * m + b * n, m, n) for m in range(count) for n in range(count)]
    points.sort()
    return points[:count]


def _brute_generators(q: int, max_degree: int) -> list[ReebCurrent]:
    """Every b^B h^H e^E with H <= 1 and degree <= max_degree, sorted by (degree, B)."""
    found = []
    for B in range(max_degree // (2 * q) + 1):
        for H in (0, 1):
            for E in range(max_degree // 2 + 1):
                d = 2 * q * B + q * H + 2 * E
                if d <= max_degree:
                    found.append((d, B, ReebCurrent(B, H, E)))
    found.sort(key=lambda item: (item[0], item[1]))
    return [current for _, _, current in found]


@pytest.fixture
def brute_staircase():
    return _brute_staircase


@pytest.fixture
def brute_generators():
    return _brute_generators
