import functools

import numpy as np
import pytest

from liespectra import linalg as la
from liespectra.generators import (
    heisenberg_fixture,
    nilpotent_family,
    random_commuting_tuple,
    solvable_example,
)
from liespectra.koszul import character_space
from liespectra.lie import verify_subalgebra
from liespectra.scalars import gq


@functools.lru_cache(maxsize=None)
def _family50():
    return tuple(nilpotent_family(50))


def family(count=50):
    """The first ``count`` members of the seeded nilpotent family (seeds 0..49)."""
    return _family50()[:count]


@functools.lru_cache(maxsize=None)
def commuting_algebras(count=5):
    out = []
    seed = 0
    while len(out) < count:
        planted = random_commuting_tuple(2 + seed % 4, 2, seed)
        seed += 1
        try:
            out.append((verify_subalgebra(planted.matrices), planted.points))
        except Exception:
            continue  # linearly dependent draw
    return tuple(out)


def all_presentations():
    """Every fixture used by the property suites: solvable examples, Heisenberg, random."""
    fixtures = [solvable_example(i).presentation for i in ("L1", "L2", "L3")]
    fixtures.append(heisenberg_fixture().presentation)
    fixtures += [f.presentation for f in family()]
    fixtures += [L for L, _ in commuting_algebras()]
    return fixtures


def random_character(L, rng):
    """A random Gaussian-integer combination of the characters of L."""
    C = character_space(L)
    coeffs = [gq((int(rng.integers(-3, 4)), int(rng.integers(-3, 4)))) for _ in range(C.shape[1])]
    f = [gq(0)] * L.n
    for k, c in enumerate(coeffs):
        for i in range(L.n):
            f[i] = f[i] + c * C[i, k]
    return tuple(f)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def L1():
    return solvable_example("L1").presentation


@pytest.fixture
def heis():
    return heisenberg_fixture().presentation


def unit(d, i, j):
    M = la.zeros(d, d, True)
    M[i, j] = gq(1)
    return M


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(line)
