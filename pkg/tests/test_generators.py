import pytest
from conftest import family

from liespectra import linalg as la
from liespectra.generators import (
    ConstructionError,
    UnknownFixtureError,
    heisenberg_fixture,
    nilpotent_family,
    random_commuting_tuple,
    random_nilpotent_algebra,
    solvable_example,
)
from liespectra.lie import NILPOTENT, SOLVABLE, bracket, verify_jordan_holder
from liespectra.weights import joint_point_spectrum


def test_solvable_fixture_values():
    fx = solvable_example("L1")
    y, x = fx.presentation.basis
    assert la.matrices_equal(bracket(x, y), y)
    assert fx.presentation.kind == SOLVABLE
    assert str(fx.expected["r_inf"]) == "1/2" and str(fx.expected["max_sp"]) == "3/2"
    assert joint_point_spectrum(fx.presentation.basis) == fx.expected["sigma_pt"]


def test_unknown_fixture():
    with pytest.raises(UnknownFixtureError):
        solvable_example("L4")


def test_heisenberg():
    fx = heisenberg_fixture()
    assert fx.presentation.kind == NILPOTENT and verify_jordan_holder(fx.presentation)


def test_family_properties():
    fam = family()
    assert len(fam) == 50
    assert all(f.presentation.kind == NILPOTENT for f in fam)
    assert all(f.presentation.d <= 8 and f.presentation.n <= 4 for f in fam)
    assert all(verify_jordan_holder(f.presentation) for f in fam)
    # the family is not just abelian algebras
    assert sum(any(f.presentation.structure.flat) for f in fam) >= 10


def test_seed_determinism():
    a = random_nilpotent_algebra(6, 4, 11)
    b = random_nilpotent_algebra(6, 4, 11)
    assert all(la.matrices_equal(x, y) for x, y in zip(a.presentation.basis, b.presentation.basis))
    assert a.expected == b.expected
    first = nilpotent_family(3)
    assert [f.id for f in first] == [f.id for f in family(3)]


def test_commuting_tuple_commutes():
    planted = random_commuting_tuple(5, 3, 4)
    for A in planted.matrices:
        for B in planted.matrices:
            assert la.matrices_equal(A @ B, B @ A)


def test_construction_error():
    with pytest.raises(ConstructionError):
        random_nilpotent_algebra(1, 3, 0, max_tries=4)
