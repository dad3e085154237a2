from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from piecewise_mobius import MoebiusMap

_CRITERIA: dict[int, list[bool]] = {}
_TITLES: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n = mark.args[0]
    _TITLES[n] = mark.args[1] if len(mark.args) > 1 else ""
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _CRITERIA.setdefault(n, []).append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok = all(_CRITERIA[n])
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {_TITLES[n]}")


def random_map(rng: np.random.Generator, scale: float = 2.0) -> MoebiusMap:
    while True:
        a, b, c, d = (complex(*rng.normal(0, scale, 2)) for _ in range(4))
        if abs(a * d - b * c) > 1e-2:
            return MoebiusMap(a, b, c, d)


def random_point(rng: np.random.Generator) -> complex:
    # uniform on the sphere, then projected
    z = rng.uniform(-1, 1)
    t = rng.uniform(0, 2 * math.pi)
    r = math.sqrt(max(0.0, 1 - z * z))
    return r * cmath.exp(1j * t) / (1 - z) if z < 1 - 1e-12 else complex(1e12)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
