from math import comb

import numpy as np
import pytest
import sympy
from conftest import commuting_algebras, family, random_character

from liespectra import linalg as la
from liespectra.generators import solvable_example
from liespectra.koszul import (
    NotACharacterError,
    boundary_matrix,
    character_space,
    exterior_basis,
    homology_dimensions,
    is_in_spectrum,
    project_spectrum,
    spectrum,
)
from liespectra.lie import verify_subalgebra
from liespectra.scalars import gq
from liespectra.weights import canonical_characters


def q(*vals):
    return tuple(gq(v) for v in vals)


def test_exterior_basis_counts():
    assert exterior_basis(4, 2) == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
    assert all(len(exterior_basis(5, p)) == comb(5, p) for p in range(6))
    assert exterior_basis(3, 4) == ()


def test_boundary_shapes_and_edges(L1):
    f = q(0, "1/2")
    assert boundary_matrix(L1, f, 1).shape == (2, 4)
    assert boundary_matrix(L1, f, 2).shape == (4, 2)
    assert boundary_matrix(L1, f, 0).shape == (0, 2)
    assert boundary_matrix(L1, f, 3).shape == (2, 0)


def test_boundary_l1_by_hand(L1):
    """Degree-2 boundary of the 2-dim algebra, written out by hand."""
    y, x = L1.basis
    f = q(0, "1/2")
    D2 = boundary_matrix(L1, f, 2)
    eye = la.identity(2, True)
    # d(e ⊗ x1∧x2) = (x1 - f1) e ⊗ x2 - (x2 - f2) e ⊗ x1 + e ⊗ [x2, x1]
    # with [x, y] = y: the bracket term is + e ⊗ x1
    top = -(x - f[1] * eye) + eye  # coefficient block on x1
    bottom = y - f[0] * eye  # coefficient block on x2
    assert la.matrices_equal(D2[:2], top)
    assert la.matrices_equal(D2[2:], bottom)


def test_chain_complex_squares_to_zero(rng):
    for L in [f.presentation for f in family(12)] + [solvable_example("L2").presentation]:
        for _ in range(3):
            f = random_character(L, rng)
            for p in range(2, L.n + 1):
                prod = boundary_matrix(L, f, p - 1) @ boundary_matrix(L, f, p)
                assert not any(prod.flat)


def test_euler_characteristic_vanishes(rng):
    """Alternating sum of homology equals that of the chain spaces, which is 0 for n >= 1."""
    for L in [f.presentation for f in family(10)]:
        f = random_character(L, rng)
        h = homology_dimensions(L, f)
        assert sum((-1) ** p * v for p, v in enumerate(h)) == 0


def test_homology_against_sympy_ranks(L1):
    f = q(0, "-3/2")
    dims = []
    for p in range(1, 3):
        D = boundary_matrix(L1, f, p)
        S = sympy.Matrix(D.shape[0], D.shape[1], lambda i, j: sympy.Rational(D[i, j].real))
        dims.append(S.rank())
    assert homology_dimensions(L1, f) == [2 - dims[0], 4 - dims[0] - dims[1], 2 - dims[1]]


def test_solvable_example_spectra():
    want = {"L1": [q(0, "-3/2"), q(0, "1/2")], "L2": [q(0, 1), q(0, 3)], "L3": [q(0, "-4/3"), q(0, "2/3")]}
    for key, pts in want.items():
        res = spectrum(solvable_example(key).presentation)
        assert res.points == pts
        assert not res.complete


def test_point_spectrum_is_not_in_sp(L1):
    assert not is_in_spectrum(L1, q(0, "-1/2"))
    assert homology_dimensions(L1, q(0, "-1/2")) == [0, 0, 0]


def test_l1_homology_degrees(L1):
    res = spectrum(L1)
    assert res.homology[q(0, "1/2")] == [1, 1, 0]
    assert res.homology[q(0, "-3/2")] == [0, 1, 1]


def test_non_character_rejected(L1):
    assert not is_in_spectrum(L1, q(1, 0))
    with pytest.raises(NotACharacterError):
        boundary_matrix(L1, q(1, 0), 1)


def test_character_space(L1, heis):
    C = character_space(L1)
    assert C.shape == (2, 1) and C[0, 0] == 0
    assert character_space(heis).shape == (3, 2)


def test_homology_spectrum_equals_weights_on_family():
    for fx in family(15):
        assert spectrum(fx.presentation).points == fx.expected["weights"]


def test_commuting_spectrum_matches_planted():
    for L, pts in commuting_algebras():
        assert spectrum(L).points == pts


def test_projection_on_prefixes():
    for L in [fx.presentation for fx in family(8)] + [solvable_example("L3").presentation]:
        full = spectrum(L)
        for m in range(1, L.n + 1):
            assert project_spectrum(L, m, full).agrees


def test_float_backend_spectrum():
    fx = family(12)[10]
    Lf = verify_subalgebra([la.to_float(x) for x in fx.presentation.basis])
    got = spectrum(Lf).points
    want = np.array([[complex(v) for v in f] for f in fx.expected["weights"]])
    assert np.allclose(np.array(got), want, atol=1e-6)


def test_spectrum_with_explicit_candidates(L2):
    res = spectrum(L2, [q(0, 1), q(0, 2), q(0, 3), q(5, 0)])
    assert res.points == [q(0, 1), q(0, 3)]
    assert canonical_characters(res.rejected) == [q(0, 2), q(5, 0)]


@pytest.fixture
def L2():
    return solvable_example("L2").presentation
