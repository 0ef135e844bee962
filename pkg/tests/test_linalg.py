import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from liespectra import linalg as la
from liespectra.scalars import GaussianRational, exact_abs, gq

small = st.integers(-4, 4)
gauss = st.builds(lambda a, b, c: GaussianRational(a, b, c), small, small, st.integers(1, 4))


def exact_from_ints(rows, imag=None):
    M = la.zeros(len(rows), len(rows[0]), True)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            M[i, j] = gq((v, imag[i][j] if imag else 0))
    return M


def to_sympy(M):
    return sympy.Matrix(M.shape[0], M.shape[1],
                        lambda i, j: sympy.Rational(M[i, j].real) + sympy.I * sympy.Rational(M[i, j].imag))


def int_matrices(max_side=5):
    return st.integers(1, max_side).flatmap(
        lambda r: st.integers(1, max_side).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


# scalars --------------------------------------------------------------------------

def test_gaussian_parsing():
    assert gq("1/2") == GaussianRational(1, 0, 2)
    assert gq("2+i") == GaussianRational(2, 1)
    assert gq("-3/2i") == GaussianRational(0, -3, 2)
    assert gq(["1/3", "-1"]) == GaussianRational(1, -3, 3)
    assert gq(0.5) == Fraction(1, 2)
    with pytest.raises(ValueError):
        gq("one half")


@given(gauss, gauss, gauss)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if b:
        assert (a / b) * b == a
    assert hash(a) == hash(a + 0)


def test_hash_matches_fraction():
    assert hash(gq("3/4")) == hash(Fraction(3, 4))
    assert {gq(2): 1}[2] == 1


def test_exact_modulus():
    assert exact_abs(gq("3+4i")) == 5
    assert isinstance(exact_abs(gq("1+i")), float)
    assert math.isclose(exact_abs(gq("1+i")), math.sqrt(2))


# rank / kernel ----------------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(int_matrices(), st.booleans())
def test_rank_matches_sympy(rows, complex_entries):
    imag = [[(v * 7 + 3) % 5 - 2 for v in row] for row in rows] if complex_entries else None
    M = exact_from_ints(rows, imag)
    assert la.rank(M) == to_sympy(M).rank()


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_rank_nullity(rows):
    M = exact_from_ints(rows)
    K = la.kernel_basis(M)
    assert la.rank(M) + K.shape[1] == M.shape[1]
    assert all(not v for v in (M @ K).flat)


def test_float_rank_and_kernel():
    M = np.array([[1, 2, 3], [2, 4, 6], [1, 0, 1]], dtype=complex)
    assert la.rank(M) == 2
    K = la.kernel_basis(M)
    assert K.shape == (3, 1)
    assert np.allclose(M @ K, 0)


def test_solve_and_inconsistent():
    A = exact_from_ints([[1, 1], [1, -1]])
    B = exact_from_ints([[3], [1]])
    assert list(la.solve(A, B).flat) == [2, 1]
    with pytest.raises(la.InconsistentSystemError):
        la.solve(exact_from_ints([[1, 1], [1, 1]]), exact_from_ints([[1], [2]]))
    with pytest.raises(la.SingularMatrixError):
        la.inverse(exact_from_ints([[1, 2], [2, 4]]))


# eigenvalues ---------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(small, small), min_size=1, max_size=5), st.integers(0, 10 ** 6))
def test_exact_eigenvalues_of_conjugated_triangular(diag, seed):
    """Upper triangular with known diagonal, conjugated by a unimodular matrix."""
    d = len(diag)
    rng = np.random.default_rng(seed)
    T = la.zeros(d, d, True)
    for i, (re, im) in enumerate(diag):
        T[i, i] = gq((re, im))
        for j in range(i + 1, d):
            T[i, j] = gq(int(rng.integers(-2, 3)))
    U = la.identity(d, True)
    for _ in range(2 * d):
        if d > 1:
            i, j = rng.choice(d, size=2, replace=False)
            U[i] = U[i] + U[j]
    M = U @ T @ la.inverse(U)
    got = la.eigenvalues_clustered(M)
    expected = {}
    for re, im in diag:
        expected[gq((re, im))] = expected.get(gq((re, im)), 0) + 1
    assert dict(got) == expected


def test_irrational_eigenvalues_raise():
    with pytest.raises(la.IrrationalEigenvalueError):
        la.eigenvalues_clustered(exact_from_ints([[0, 2], [1, 0]]))


def test_float_jordan_block_is_one_cluster():
    J = np.diag([2.0, 2.0, 2.0]).astype(complex) + np.diag([1.0, 1.0], 1)
    U = np.array([[1, 2, 0], [0, 1, 3], [1, 0, 1]], dtype=complex)
    M = U @ J @ np.linalg.inv(U)
    (lam, mult), = la.eigenvalues_clustered(M)
    assert mult == 3 and abs(lam - 2) < 1e-4


def test_lambda_max_hermitian():
    assert math.isclose(la.lambda_max_hermitian(np.array([[2, 1], [1, 2]], dtype=complex)), 3.0)
    with pytest.raises(la.NotHermitianError):
        la.lambda_max_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


# norms and parameters --------------------------------------------------------------

def test_parse_p():
    assert la.parse_p("inf") == math.inf
    assert la.parse_p("2") == 2.0
    with pytest.raises(la.InvalidParameterError):
        la.parse_p(0.5)


def test_vector_p_norm_exact():
    v = [gq("3/2"), gq("-2i")]
    assert la.vector_p_norm(v, "inf") == 2
    assert la.vector_p_norm(v, 1) == Fraction(7, 2)
    assert la.vector_p_norm(v, 2) == Fraction(5, 2)
    assert math.isclose(la.vector_p_norm(v, 4), ((1.5) ** 4 + 16) ** 0.25)


def test_tolerances_validate():
    with pytest.raises(ValueError):
        la.Tolerances(rank_tol=-1)
