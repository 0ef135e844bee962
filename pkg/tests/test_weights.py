import numpy as np
import pytest
from conftest import family, unit

from liespectra import linalg as la
from liespectra.generators import random_commuting_tuple
from liespectra.lie import verify_subalgebra
from liespectra.radius import diagonal_nilpotent_split
from liespectra.scalars import gq
from liespectra.weights import (
    NotNilpotentError,
    block_point_spectrum,
    canonical_characters,
    joint_point_spectrum,
    triangularizing_basis,
    weight_decomposition,
)


def test_weights_match_planted():
    for f in family(25):
        spaces = weight_decomposition(f.presentation)
        assert canonical_characters([s.weight for s in spaces]) == f.expected["weights"]
        assert sum(s.dim for s in spaces) == f.presentation.d


def test_weight_spaces_are_invariant_and_generalized_eigenspaces():
    for f in family(15):
        L = f.presentation
        for s in weight_decomposition(L):
            for x, a in zip(L.basis, s.weight):
                # invariance: x B lies in span(B)
                la.solve(s.basis, x @ s.basis)
                N = x - a * la.identity(L.d, True)
                P = la.identity(L.d, True)
                for _ in range(L.d):
                    P = P @ N
                assert all(not v for v in (P @ s.basis).flat)


def test_weights_vanish_on_derived_algebra():
    for f in family(30):
        L = f.presentation
        for s in weight_decomposition(L):
            assert L.is_character(s.weight)


def test_triangularizing_basis_shape():
    for f in family(12):
        L = f.presentation
        P, B = triangularizing_basis(L)
        assert sorted(B.sizes) == sorted(f.expected["blocks"]) or sum(B.sizes) == L.d
        D, N = diagonal_nilpotent_split(B)
        for blk_start, blk in zip(np.cumsum([0] + B.sizes[:-1]), B.blocks):
            for X, c in zip(B.matrices, blk.diagonal):
                for i in range(blk_start, blk_start + blk.basis.shape[1]):
                    assert X[i, i] == c
        assert block_point_spectrum(B) == f.expected["weights"]
        assert all(la.matrices_equal(d + n, x) for d, n, x in zip(D, N, B.matrices))


def test_joint_point_spectrum_commuting():
    for seed in range(15):
        planted = random_commuting_tuple(2 + seed % 5, 1 + seed % 3, seed)
        assert joint_point_spectrum(planted.matrices) == planted.points


def test_joint_point_spectrum_float_backend():
    planted = random_commuting_tuple(4, 2, 7)
    got = joint_point_spectrum([la.to_float(x) for x in planted.matrices])
    assert len(got) == len(planted.points)
    for f, g in zip(got, planted.points):
        assert np.allclose(np.array(f, dtype=complex), np.array([complex(v) for v in g]), atol=1e-6)


def test_not_nilpotent_rejected(L1):
    with pytest.raises(NotNilpotentError):
        weight_decomposition(L1)


def test_direct_sum_weights():
    """Weights of a direct sum are the union of the weights of the summands."""
    a, b = family(20)[7].presentation, family(20)[13].presentation
    n = min(a.n, b.n)
    mats = []
    for x, y in zip(a.basis[:n], b.basis[:n]):
        M = la.zeros(a.d + b.d, a.d + b.d, True)
        M[:a.d, :a.d] = x
        M[a.d:, a.d:] = y
        mats.append(M)
    try:
        L = verify_subalgebra(mats)
    except Exception:
        pytest.skip("truncated bases do not close")
    got = canonical_characters([s.weight for s in weight_decomposition(L)])
    wa = [w[:n] for w in canonical_characters([s.weight for s in weight_decomposition(verify_subalgebra(a.basis[:n]))])]
    wb = [w[:n] for w in canonical_characters([s.weight for s in weight_decomposition(verify_subalgebra(b.basis[:n]))])]
    assert got == canonical_characters(wa + wb)


def test_heisenberg_single_weight(heis):
    (s,) = weight_decomposition(heis)
    assert s.weight == (0, 0, 0) and s.dim == 3


def test_similarity_invariance():
    f = family(10)[5]
    L = f.presentation
    U = la.identity(L.d, True)
    U[0] = U[0] + 3 * U[-1] if L.d > 1 else U[0]
    conj = verify_subalgebra([U @ x @ la.inverse(U) for x in L.basis])
    assert canonical_characters([s.weight for s in weight_decomposition(conj)]) == f.expected["weights"]


def test_unit_helper_sanity():
    assert unit(2, 0, 1)[0, 1] == gq(1)
