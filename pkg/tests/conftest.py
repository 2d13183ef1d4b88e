"""Shared Gram fixtures.

The expensive builds are session-scoped and timed; the acceptance tests
assert on the recorded wall-clock costs, so fixtures must stay the only
place these matrices get built.
"""

import time

import pytest

from bnladder import IndexWindow, SmoothingParams, build_gram

SMOOTH_DEFAULT = SmoothingParams(W=5.0, epsilon=1.0e-6)


@pytest.fixture(scope="session")
def build_times():
    return {}


def _timed_build(times, key, *args, **kwargs):
    t0 = time.perf_counter()
    g = build_gram(*args, **kwargs)
    times[key] = time.perf_counter() - t0
    return g


@pytest.fixture(scope="session")
def gram_3x3_raw_direct(build_times):
    return _timed_build(build_times, "3x3_raw_direct", IndexWindow(3, 3), kind="raw", method="direct")


@pytest.fixture(scope="session")
def gram_3x3_raw_spectral(build_times):
    return _timed_build(build_times, "3x3_raw_spectral", IndexWindow(3, 3), kind="raw", method="spectral")


@pytest.fixture(scope="session")
def gram_6x6_raw_direct(build_times):
    return _timed_build(build_times, "6x6_raw_direct", IndexWindow(6, 6), kind="raw", method="direct")


@pytest.fixture(scope="session")
def gram_6x6_smoothed(build_times):
    return _timed_build(
        build_times,
        "6x6_smoothed",
        IndexWindow(6, 6),
        kind="smoothed",
        method="hybrid",
        smoothing=SMOOTH_DEFAULT,
    )


@pytest.fixture(scope="session")
def gram_8x8_raw_direct(build_times):
    return _timed_build(build_times, "8x8_raw_direct", IndexWindow(8, 8), kind="raw", method="direct")


@pytest.fixture(scope="session")
def gram_8x8_smoothed(build_times):
    return _timed_build(
        build_times,
        "8x8_smoothed",
        IndexWindow(8, 8),
        kind="smoothed",
        method="hybrid",
        smoothing=SMOOTH_DEFAULT,
    )
