import time

import pytest

from satotate.angles import build_angle_series
from satotate.curves import CURVE_11A1, CURVE_32A, CURVE_37A1

# The big builds are shared by many tests; wall time is recorded so the
# acceptance module can account for it in its runtime budgets.
BUILD_TIMES: dict[str, float] = {}

X_MAX_11A1 = 1_105_200  # covers x e^eps for x = 1e6, eps = 0.1
X_MAX_37A1 = 1_000_000


@pytest.fixture(scope="session")
def series_11a1_big():
    t0 = time.time()
    series = build_angle_series(CURVE_11A1, X_MAX_11A1)
    BUILD_TIMES["11a1"] = time.time() - t0
    return series


@pytest.fixture(scope="session")
def series_37a1_big():
    t0 = time.time()
    series = build_angle_series(CURVE_37A1, X_MAX_37A1)
    BUILD_TIMES["37a1"] = time.time() - t0
    return series


@pytest.fixture(scope="session")
def series_11a1_small():
    return build_angle_series(CURVE_11A1, 10_000)


@pytest.fixture(scope="session")
def series_37a1_small():
    return build_angle_series(CURVE_37A1, 10_000)


@pytest.fixture(scope="session")
def series_32a_medium():
    return build_angle_series(CURVE_32A, 100_000)
