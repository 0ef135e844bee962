"""Built-in fixtures and seeded random families with planted ground truth."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg as la
from .lie import LiePresentation, bracket, jordan_holder_basis, verify_subalgebra
from .linalg import exact_matrix
from .scalars import GaussianRational, gq
from .weights import canonical_characters

__all__ = [
    "Fixture",
    "PlantedTuple",
    "UnknownFixtureError",
    "ConstructionError",
    "SOLVABLE_IDS",
    "solvable_example",
    "heisenberg_fixture",
    "random_commuting_tuple",
    "random_nilpotent_algebra",
    "nilpotent_family",
]

SOLVABLE_IDS = ("L1", "L2", "L3")


class UnknownFixtureError(KeyError):
    pass


class ConstructionError(RuntimeError):
    pass


@dataclass
class Fixture:
    id: str
    presentation: LiePresentation
    names: tuple = ()
    expected: dict = field(default_factory=dict)


@dataclass
class PlantedTuple:
    matrices: tuple
    points: list  # planted joint point spectrum


def _q(*pairs):
    return [tuple(gq(v) for v in pair) for pair in pairs]


# (y, x) pairs of the two-dimensional solvable algebra [x, y] = y
_SOLVABLE = {
    "L1": dict(
        y=[[0, 2], [0, 0]], x=[["-1/2", 0], [0, "1/2"]],
        sigma_pt=_q((0, "-1/2")), sp=_q((0, "-3/2"), (0, "1/2")),
        r_inf=Fraction(1, 2), rho_inf=Fraction(1, 2), max_sp=Fraction(3, 2)),
    "L2": dict(
        y=[[0, 1], [0, 0]], x=[[2, 0], [0, 3]],
        sigma_pt=_q((0, 2)), sp=_q((0, 1), (0, 3)),
        r_inf=Fraction(2), rho_inf=Fraction(3), max_sp=Fraction(3)),
    "L3": dict(
        y=[[0, 1], [0, 0]], x=[["-1/3", 0], [0, "2/3"]],
        sigma_pt=_q((0, "-1/3")), sp=_q((0, "-4/3"), (0, "2/3")),
        r_inf=Fraction(1, 3), rho_inf=Fraction(2, 3), max_sp=Fraction(4, 3)),
}


def solvable_example(id: str) -> Fixture:
    """The solvable, non-nilpotent examples L1, L2, L3, in the order (y, x)."""
    try:
        entry = _SOLVABLE[id]
    except KeyError:
        raise UnknownFixtureError(f"unknown fixture id {id!r}; choose from {SOLVABLE_IDS}") from None
    L = verify_subalgebra([exact_matrix(entry["y"]), exact_matrix(entry["x"])])
    expected = {k: v for k, v in entry.items() if k not in ("y", "x")}
    return Fixture(id, L, ("y", "x"), expected)


def _unit(d, i, j):
    M = la.zeros(d, d, True)
    M[i, j] = gq(1)
    return M


def heisenberg_fixture() -> Fixture:
    """Strictly upper triangular 3 x 3 matrices, basis (E13, E12, E23)."""
    basis = [_unit(3, 0, 2), _unit(3, 0, 1), _unit(3, 1, 2)]
    L = verify_subalgebra(basis)
    zero = gq(0)
    return Fixture("heisenberg", L, ("E13", "E12", "E23"), {
        "weights": [(zero, zero, zero)], "sigma_pt": [(zero, zero, zero)],
        "sp": [(zero, zero, zero)], "r_inf": Fraction(0), "rho_inf": Fraction(0),
        "max_sp": Fraction(0)})


# random families --------------------------------------------------------------

def _gaussian_int(rng, lo, hi, complex_prob):
    re = int(rng.integers(lo, hi + 1))
    im = int(rng.integers(lo, hi + 1)) if rng.random() < complex_prob else 0
    return GaussianRational(re, im)


def _composition(rng, d, max_blocks=3):
    s = int(rng.integers(1, min(d, max_blocks) + 1))
    cuts = sorted(rng.choice(np.arange(1, d), size=s - 1, replace=False).tolist()) if s > 1 else []
    edges = [0] + cuts + [d]
    return [(edges[i], edges[i + 1]) for i in range(s)]


def _unimodular(rng, d, steps=None):
    """Integer matrix with determinant 1 (and integer inverse)."""
    U = la.identity(d, True)
    if d == 1:
        return U
    steps = steps if steps is not None else 2 * d
    for _ in range(steps):
        i, j = rng.choice(d, size=2, replace=False)
        k = gq(int(rng.choice([-1, 1])))
        U[i] = U[i] + k * U[j]
    return U


def _strict_upper(rng, d, blocks, density=0.6, lo=-2, hi=2):
    N = la.zeros(d, d, True)
    for a, b in blocks:
        for i in range(a, b):
            for j in range(i + 1, b):
                if rng.random() < density:
                    N[i, j] = gq(int(rng.integers(lo, hi + 1)))
    return N


def _block_scalar(values, d, blocks):
    D = la.zeros(d, d, True)
    for (a, b), v in zip(blocks, values):
        for i in range(a, b):
            D[i, i] = v
    return D


def _conjugate(mats, U):
    Uinv = la.inverse(U)
    return [U @ X @ Uinv for X in mats]


def random_commuting_tuple(d: int, n: int, seed: int, complex_prob: float = 0.3) -> PlantedTuple:
    """Commuting n-tuple U (D_i + p_i(N)) U^-1 with known joint point spectrum.

    On each diagonal block the i-th matrix is c I + a N + b N^2 for one
    random strictly upper triangular N per block, so everything commutes.
    """
    rng = np.random.default_rng(seed)
    blocks = _composition(rng, d)
    nil = _strict_upper(rng, d, blocks)
    nil2 = nil @ nil
    mats = []
    diag = [[None] * len(blocks) for _ in range(n)]
    for i in range(n):
        for j in range(len(blocks)):
            diag[i][j] = _gaussian_int(rng, -3, 3, complex_prob)
        D = _block_scalar(diag[i], d, blocks)
        a = gq(int(rng.integers(-2, 3)))
        b = gq(int(rng.integers(-1, 2)))
        mats.append(D + a * nil + b * nil2)
    points = canonical_characters([tuple(diag[i][j] for i in range(n)) for j in range(len(blocks))])
    U = _unimodular(rng, d)
    return PlantedTuple(tuple(_conjugate(mats, U)), points)


def _closure(mats, limit):
    """Lie closure of a list of matrices; None once the dimension exceeds ``limit``."""
    basis = []
    for m in mats:
        if not _in_span(m, basis):
            basis.append(m)
    if len(basis) > limit:
        return None
    i = 0
    while i < len(basis):
        for j in range(i):
            br = bracket(basis[j], basis[i])
            if not _in_span(br, basis):
                basis.append(br)
                if len(basis) > limit:
                    return None
        i += 1
    return basis


def _in_span(M, basis):
    if not any(M.flat):
        return True
    if not basis:
        return False
    A = np.stack([b.reshape(-1) for b in basis], axis=1)
    return la.rank(np.hstack([A, M.reshape(-1, 1)])) == la.rank(A)


def _commuting_basis(rng, d, n, blocks, complex_prob):
    shared = _strict_upper(rng, d, blocks)
    gens = []
    for _ in range(n):
        D = _block_scalar([_gaussian_int(rng, -3, 3, complex_prob) for _ in blocks], d, blocks)
        gens.append(D + gq(int(rng.integers(-2, 3))) * shared)
    return _closure(gens, n)


def _shifted_nilpotent_basis(rng, d, n, blocks, complex_prob):
    """Strictly upper triangular algebra n0 plus block-scalar shifts.

    Shifts go only on elements outside [n0, n0] and on extra pure-diagonal
    elements, so every bracket lands in [n0, n0] and the span stays closed.
    """
    big = [(a, b) for a, b in blocks if b - a >= 3]
    if big and n >= 3 and rng.random() < 0.5:
        # Heisenberg triple E_ij, E_jk (and their bracket E_ik) inside one block
        a, b = big[int(rng.integers(len(big)))]
        i, j, k = sorted(rng.choice(np.arange(a, b), size=3, replace=False).tolist())
        gens = [gq(int(rng.choice([-2, -1, 1, 2]))) * _unit(d, i, j),
                gq(int(rng.choice([-2, -1, 1, 2]))) * _unit(d, j, k)]
    else:
        gens = [_strict_upper(rng, d, blocks, density=0.5) for _ in range(int(rng.integers(1, 3)))]
    nil = _closure(gens, n)
    if nil is None:
        return None
    derived = []
    for i in range(len(nil)):
        for j in range(i):
            br = bracket(nil[j], nil[i])
            if not _in_span(br, derived):
                derived.append(br)
    out = list(derived)
    for m in nil:
        if not _in_span(m, out):
            D = _block_scalar([_gaussian_int(rng, -3, 3, complex_prob) for _ in blocks], d, blocks)
            out.append(m + D)
    while len(out) < n:
        D = _block_scalar([_gaussian_int(rng, -3, 3, complex_prob) for _ in blocks], d, blocks)
        if nil and rng.random() < 0.5:
            D = D + gq(int(rng.integers(-2, 3))) * nil[int(rng.integers(len(nil)))]
        if _in_span(D, out):
            return None
        out.append(D)
    return out


def random_nilpotent_algebra(d: int, n: int, seed: int, complex_prob: float = 0.2,
                             max_tries: int = 200) -> Fixture:
    """A seeded nilpotent matrix Lie algebra of dimension n acting on C^d.

    Built in planted block-triangular form (block-scalar diagonals plus
    strictly upper triangular parts inside the blocks), put in Jordan-Hölder
    order, then conjugated by a unimodular integer matrix.  The expected
    weights are read off the planted diagonals.
    """
    if d < 1 or n < 1:
        raise la.InvalidParameterError("need d >= 1 and n >= 1")
    rng = np.random.default_rng(seed)
    for attempt in range(max_tries):
        blocks = _composition(rng, d)
        if attempt >= max_tries // 2 or rng.random() < 0.25:
            basis = _commuting_basis(rng, d, n, blocks, complex_prob)
        else:
            basis = _shifted_nilpotent_basis(rng, d, n, blocks, complex_prob)
        if basis is None or len(basis) != n or _closure(basis, n) is None:
            continue
        planted = verify_subalgebra(basis)
        jh = jordan_holder_basis(planted)
        weights = canonical_characters(
            [tuple(x[a, a] for x in jh.basis) for a, _ in blocks])
        U = _unimodular(rng, d)
        L = verify_subalgebra(_conjugate(jh.basis, U))
        if not L.jh_ordered:
            raise ConstructionError("conjugation broke the Jordan-Hölder order")
        names = tuple(f"x{i + 1}" for i in range(n))
        return Fixture(f"random-nilpotent-d{d}-n{n}-s{seed}", L, names, {
            "weights": weights, "sigma_pt": weights, "sp": weights,
            "blocks": [b - a for a, b in blocks]})
    raise ConstructionError(f"no nilpotent algebra of dimension {n} found in {max_tries} tries")


def nilpotent_family(count: int, base_seed: int = 0, max_d: int = 8, max_n: int = 4) -> list[Fixture]:
    """``count`` seeded nilpotent fixtures with d <= max_d and n <= max_n.

    Sizes cycle so that most members have n >= 3 (where non-abelian
    nilpotent algebras exist).
    """
    sizes = [1, 2, 3, 3, 4, 4]
    out = []
    for k in range(count):
        seed = base_seed + k
        d = 2 + seed % (max_d - 1)
        n = min(d, max_n, sizes[seed % len(sizes)])
        out.append(random_nilpotent_algebra(d, n, seed))
    return out
