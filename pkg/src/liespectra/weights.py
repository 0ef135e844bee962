"""Weight spaces, triangular block bases and the joint point spectrum."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg as la
from .lie import NILPOTENT, LieError, LiePresentation, as_tuple, common_flag
from .linalg import DEFAULT_TOL, Tolerances
from .scalars import GaussianRational

__all__ = [
    "NotNilpotentError",
    "CandidateOverflowError",
    "WeightSpace",
    "Block",
    "BlockStructure",
    "character_key",
    "canonical_characters",
    "weight_decomposition",
    "triangularizing_basis",
    "joint_point_spectrum",
    "block_point_spectrum",
]

CANDIDATE_CAP = 10 ** 6


class NotNilpotentError(LieError):
    pass


class CandidateOverflowError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class WeightSpace:
    weight: tuple
    basis: np.ndarray  # d x k, columns span the weight space

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True, eq=False)
class Block:
    basis: np.ndarray
    diagonal: tuple


@dataclass(frozen=True, eq=False)
class BlockStructure:
    blocks: tuple
    change_of_basis: np.ndarray
    matrices: tuple  # P^-1 x_i P, block diagonal and upper triangular

    @property
    def s(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> list[int]:
        return [b.basis.shape[1] for b in self.blocks]


def character_key(f) -> tuple:
    key = []
    for z in f:
        if isinstance(z, GaussianRational):
            key.append((z.real, z.imag))
        else:
            z = complex(z)
            key.append((round(z.real, 9), round(z.imag, 9)))
    return tuple(key)


def canonical_characters(chars, tol: Tolerances = DEFAULT_TOL) -> list[tuple]:
    """Deduplicate and sort characters lexicographically by (re, im)."""
    out: list[tuple] = []
    for f in chars:
        f = tuple(f)
        if not any(all(la.scalars_close(a, b, tol) for a, b in zip(f, g)) for g in out):
            out.append(f)
    return sorted(out, key=character_key)


def _restrict(M: np.ndarray, B: np.ndarray, tol: Tolerances) -> np.ndarray:
    """Matrix of M on the invariant subspace spanned by the columns of B."""
    return la.solve(B, M @ B, tol)


def _require_nilpotent(L: LiePresentation):
    if L.kind != NILPOTENT:
        raise NotNilpotentError(f"weight theory needs a nilpotent algebra, got {L.kind}")


def weight_decomposition(L: LiePresentation) -> list[WeightSpace]:
    """Split E into the weight spaces of a nilpotent algebra.

    Each current invariant subspace is split into generalized eigenspaces of
    the next basis element; nilpotency keeps every piece L-invariant.
    """
    _require_nilpotent(L)
    tol = L.tol
    d, exact = L.d, L.exact
    pieces = [((), la.identity(d, exact))]
    for x in L.basis:
        refined = []
        for weight, B in pieces:
            R = _restrict(x, B, tol)
            k = R.shape[0]
            eye = la.identity(k, exact)
            for lam, mult in la.eigenvalues_clustered(R, tol):
                shifted = R - lam * eye
                power = eye
                for _ in range(mult):
                    power = power @ shifted
                if exact:
                    K = la.kernel_basis(power, tol)
                else:
                    # the generalized eigenspace has dimension mult
                    K = la.smallest_singular_subspace(power, mult)
                if K.shape[1]:
                    refined.append((weight + (lam,), B @ K))
        pieces = refined
    spaces = [WeightSpace(w, B) for w, B in pieces]
    return sorted(spaces, key=lambda s: character_key(s.weight))


def triangularizing_basis(L: LiePresentation) -> tuple[np.ndarray, BlockStructure]:
    """Change of basis putting every x_i in block upper-triangular form.

    Blocks are the weight spaces; inside a block each x_i is upper
    triangular with constant diagonal alpha(x_i).
    """
    spaces = weight_decomposition(L)
    tol = L.tol
    blocks = []
    cols = []
    for space in spaces:
        restricted = [_restrict(x, space.basis, tol) for x in L.basis]
        F = common_flag(restricted, tol, eigen=space.weight)
        basis = space.basis @ F
        blocks.append(Block(basis, space.weight))
        cols.append(basis)
    P = np.hstack(cols)
    Pinv = la.inverse(P, tol)
    mats = tuple(Pinv @ x @ P for x in L.basis)
    return P, BlockStructure(tuple(blocks), P, mats)


def joint_point_spectrum(T: Sequence[np.ndarray], tol: Tolerances = DEFAULT_TOL) -> list[tuple]:
    """All lambda with a common eigenvector: T_i v = lambda_i v for every i.

    Candidates come from the eigenvalues of each T_i; a partial tuple is
    abandoned as soon as the intersected eigenspaces become zero.
    """
    T = as_tuple(T)
    d = T[0].shape[0]
    exact = la.is_exact(T[0])
    eye = la.identity(d, exact)
    spectra = [[lam for lam, _ in la.eigenvalues_clustered(M, tol)] for M in T]
    found: list[tuple] = []
    visited = 0

    def search(i, K, prefix):
        nonlocal visited
        if i == len(T):
            found.append(prefix)
            return
        for lam in spectra[i]:
            visited += 1
            if visited > CANDIDATE_CAP:
                raise CandidateOverflowError("joint point spectrum candidate cap exceeded")
            K2 = K @ la.kernel_basis((T[i] - lam * eye) @ K, tol, la.operator_scale(T[i]))
            if K2.shape[1]:
                search(i + 1, K2, prefix + (lam,))

    search(0, eye, ())
    return canonical_characters(found, tol)


def block_point_spectrum(B: BlockStructure, tol: Tolerances = DEFAULT_TOL) -> list[tuple]:
    """The distinct diagonal tuples of a block structure."""
    return canonical_characters([blk.diagonal for blk in B.blocks], tol)
