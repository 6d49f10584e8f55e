"""Shared fixtures: one solved instance of every reachable case tag.

The instance map is built once per norm exponent and shared across the
test modules, because solving all ~30 branches is the dominant cost of
the suite.
"""

import math
import warnings

import pytest

from lwsurf import (
    IllConditionedWarning,
    NormParameter,
    solve_constant_k1,
    solve_constant_k2,
    solve_homogeneous,
    solve_inhom_general,
    solve_inhom_lambda_minus1,
)


def crit_mid(lam: float) -> float:
    """Double-root constant for -1 < lam < 0, mu = +1."""
    return 1.0 / ((lam + 1.0) * (-lam) ** (-lam))


def thr_low(lam: float) -> float:
    """Double-root constant for lam < -1, mu = +1."""
    w = -(lam + 1.0)
    return -1.0 / (w * (w + 1.0) ** (w + 1.0))


def build_instances(m: int) -> dict:
    """One representative ProfileBranch per reachable case tag.

    The cylinder tag 4i has no profile table (alpha is constant) and is
    therefore not in the map; it is covered by the assembler tests.
    """
    p = NormParameter(m)
    slow_lam = 0.5 / (2 * m - 1)  # below the (2m-1)*lam = 1 threshold
    out = {}

    def put(branches):
        if not isinstance(branches, list):
            branches = [branches]
        for b in branches:
            out.setdefault(b.case.value, b)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllConditionedWarning)
        put(solve_constant_k2(p))
        put(solve_constant_k1(p, 1.0, 2.0))
        put(solve_constant_k1(p, -1.0, -2.0))
        put(solve_homogeneous(p, 1.0, 1.0))
        put(solve_homogeneous(p, slow_lam, 1.0))
        put(solve_homogeneous(p, -0.5, 1.0))
        for c1 in (0.5, 1.0, 1.5):
            put(solve_inhom_lambda_minus1(p, 1.0, c1))
        put(solve_inhom_lambda_minus1(p, -1.0, -0.5))
        put(solve_inhom_general(p, 0.5, 1.0, 0.8))
        put(solve_inhom_general(p, 0.5, -1.0, 0.0))
        put(solve_inhom_general(p, 1.0, -1.0, 0.3))
        put(solve_inhom_general(p, 0.5, -1.0, -0.5))
        for c1 in (2.0, crit_mid(-0.5), 3.2):
            put(solve_inhom_general(p, -0.5, 1.0, c1))
        put(solve_inhom_general(p, -0.5, -1.0, 0.0))
        put(solve_inhom_general(p, -0.5, -1.0, 2.0))
        put(solve_inhom_general(p, -0.5, -1.0, -1.0))
        for c1 in (0.0, 0.3, -0.4, thr_low(-2.0), -0.1):
            put(solve_inhom_general(p, -2.0, 1.0, c1))
        put(solve_inhom_general(p, -2.0, -1.0, 0.4))
    return out


_CACHE: dict = {}


def instances(m: int) -> dict:
    if m not in _CACHE:
        _CACHE[m] = build_instances(m)
    return _CACHE[m]


@pytest.fixture(scope="session")
def instances_m2() -> dict:
    return instances(2)


@pytest.fixture(scope="session")
def instances_m3() -> dict:
    return instances(3)


ALL_TAGS_WITH_TABLE = [
    "4ii", "4iii-1", "4iii-2",
    "5i-1", "5i-2", "5ii",
    "6.1i-1", "6.1i-2-1", "6.1i-2-2", "6.1i-3-1", "6.1i-3-2", "6.1ii",
    "6.3i", "6.3ii-1", "6.3ii-2", "6.3ii-3",
    "6.3iii-1", "6.3iii-2-1", "6.3iii-2-2", "6.3iii-3-1", "6.3iii-3-2",
    "6.3iv-1", "6.3iv-2", "6.3iv-3",
    "6.3v-1", "6.3v-2", "6.3v-3-1", "6.3v-3-2-1", "6.3v-3-2-2",
    "6.3v-3-3-1", "6.3v-3-3-2", "6.3vi",
]
