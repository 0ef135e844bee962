"""The Koszul complex (E ⊗ ΛL, d(f)) and the joint spectrum Sp(L, E).

Chain space ``E ⊗ Λ^p L`` uses the basis ``e_r ⊗ x_S`` with ``S`` running
over the p-subsets of {0..n-1} in lexicographic order and the E-index
varying fastest, so the basis vector ``e_r ⊗ x_S`` sits at
``position(S) * d + r``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from . import linalg as la
from .lie import NILPOTENT, LieError, LiePresentation, common_flag, ideal_and_projection
from .linalg import Tolerances
from .scalars import GaussianRational, gq
from .weights import canonical_characters, weight_decomposition

__all__ = [
    "NotACharacterError",
    "SpectrumResult",
    "ProjectionResult",
    "exterior_basis",
    "boundary_matrix",
    "homology_dimensions",
    "is_in_spectrum",
    "character_space",
    "spectrum_candidates",
    "spectrum",
    "project_spectrum",
]


class NotACharacterError(LieError):
    pass


@lru_cache(maxsize=None)
def exterior_basis(n: int, p: int) -> tuple[tuple[int, ...], ...]:
    """Sorted p-subsets of range(n), lexicographic."""
    if p < 0 or p > n:
        return ()
    return tuple(itertools.combinations(range(n), p))


@lru_cache(maxsize=None)
def _positions(n: int, p: int) -> dict:
    return {S: i for i, S in enumerate(exterior_basis(n, p))}


def _coerce_character(L: LiePresentation, f) -> tuple:
    f = tuple(f)
    if len(f) != L.n:
        raise la.InvalidParameterError(f"character needs {L.n} coordinates, got {len(f)}")
    if L.exact:
        try:
            return tuple(gq(v) for v in f)
        except TypeError:
            pass
    return tuple(complex(v) for v in f)


def boundary_matrix(L: LiePresentation, f, p: int) -> np.ndarray:
    """Matrix of d_p(f): E ⊗ Λ^p L -> E ⊗ Λ^{p-1} L.

    Out-of-range degrees (p <= 0 or p > n) give the zero map.
    """
    f = _coerce_character(L, f)
    if not L.is_character(f):
        raise NotACharacterError("functional does not vanish on L^2")
    n, d = L.n, L.d
    exact = L.exact and all(isinstance(v, GaussianRational) for v in f)
    basis = L.basis if exact else tuple(la.to_float(x) for x in L.basis)
    rows = d * comb(n, p - 1) if 1 <= p <= n + 1 else 0
    cols = d * comb(n, p) if 0 <= p <= n else 0
    D = la.zeros(rows, cols, exact)
    if not 1 <= p <= n:
        return D
    eye = la.identity(d, exact)
    target = _positions(n, p - 1)
    structure = L.structure if exact else la.to_float(L.structure) if L.exact else L.structure
    for col, S in enumerate(exterior_basis(n, p)):
        c0 = col * d
        for k, idx in enumerate(S):
            rest = S[:k] + S[k + 1:]
            r0 = target[rest] * d
            sign = 1 if k % 2 == 0 else -1  # (-1)^{k+1} with 1-based k
            D[r0:r0 + d, c0:c0 + d] += sign * (basis[idx] - f[idx] * eye)
        for k, l in itertools.combinations(range(p), 2):
            rest = S[:k] + S[k + 1:l] + S[l + 1:]
            sign = 1 if (k + l) % 2 == 0 else -1  # (-1)^{k+l}, same parity 1-based
            for h in range(n):
                c = structure[S[k], S[l], h]
                if not c or h in rest:
                    continue
                # move x_h from the front into sorted position
                shift = sum(1 for v in rest if v < h)
                s = sign if shift % 2 == 0 else -sign
                new = tuple(sorted(rest + (h,)))
                r0 = target[new] * d
                D[r0:r0 + d, c0:c0 + d] += (s * c) * eye
    return D


def homology_dimensions(L: LiePresentation, f) -> list[int]:
    """dim H_p of the complex for p = 0..n, from ranks of the boundary maps."""
    n, d = L.n, L.d
    ranks = [0] * (n + 2)
    for p in range(1, n + 1):
        ranks[p] = la.rank(boundary_matrix(L, f, p), L.tol)
    return [d * comb(n, p) - ranks[p] - ranks[p + 1] for p in range(n + 1)]


def is_in_spectrum(L: LiePresentation, f) -> bool:
    """True iff f is a character of L and the complex has nonzero homology."""
    f = _coerce_character(L, f)
    if not L.is_character(f):
        return False
    return any(h != 0 for h in homology_dimensions(L, f))


def character_space(L: LiePresentation) -> np.ndarray:
    """Basis (columns) of the characters: functionals vanishing on L^2."""
    n = L.n
    rows = []
    for a in range(n):
        for b in range(a + 1, n):
            rows.append(L.structure[a, b])
    if not rows:
        return la.identity(n, L.exact)
    return la.kernel_basis(np.stack(rows), L.tol)


def _diagonal_tuples(mats, tol: Tolerances) -> list[tuple]:
    """Diagonal tuples (with multiplicity) of a simultaneous triangularization."""
    P = common_flag(mats, tol)
    Pinv = la.inverse(P, tol)
    tri = [Pinv @ M @ P for M in mats]
    k = P.shape[0]
    return [tuple(T[i, i] for T in tri) for i in range(k)]


def _adjoint_matrices(L: LiePresentation) -> list[np.ndarray]:
    # ad(x_a) y = [x_a, y]; column b holds the coordinates of [x_a, x_b]
    return [np.array(L.structure[a].T) for a in range(L.n)]


def spectrum_candidates(L: LiePresentation) -> tuple[list[tuple], bool]:
    """Default candidates for Sp(L, E) and whether they are provably complete.

    Nilpotent algebras: the weights.  Otherwise every diagonal tuple mu of a
    triangularization of E shifted by subset sums of the diagonal tuples of
    the adjoint representation, with both signs.
    """
    if L.kind == NILPOTENT:
        return [s.weight for s in weight_decomposition(L)], True
    mus = canonical_characters(_diagonal_tuples(L.basis, L.tol), L.tol)
    betas = _diagonal_tuples(_adjoint_matrices(L), L.tol)
    shifts = set()
    zero = gq(0) if L.exact else 0j
    for r in range(len(betas) + 1):
        for subset in itertools.combinations(range(len(betas)), r):
            total = tuple(sum((betas[j][i] for j in subset), zero) for i in range(L.n))
            shifts.add(total)
    cands = []
    for mu in mus:
        for s in shifts:
            cands.append(tuple(a - b for a, b in zip(mu, s)))
            cands.append(tuple(a + b for a, b in zip(mu, s)))
    cands = [c for c in canonical_characters(cands, L.tol) if L.is_character(c)]
    return cands, False


@dataclass
class SpectrumResult:
    points: list
    homology: dict = field(default_factory=dict)
    method: str = "homology"
    complete: bool = False
    rejected: list = field(default_factory=list)


def spectrum(L: LiePresentation, candidates=None) -> SpectrumResult:
    """Sp(L, E) in coordinates dual to the basis of L.

    Every candidate is filtered through the homology test, so returned points
    are always members; ``complete`` records whether the candidate set is
    known to contain the whole spectrum.
    """
    if candidates is None:
        candidates, complete = spectrum_candidates(L)
    else:
        complete = False
    points, homology, rejected = [], {}, []
    for f in canonical_characters([_coerce_character(L, f) for f in candidates], L.tol):
        if not L.is_character(f):
            rejected.append(f)
            continue
        dims = homology_dimensions(L, f)
        if any(dims):
            points.append(f)
            homology[f] = dims
        else:
            rejected.append(f)
    return SpectrumResult(points, homology, "homology", complete, rejected)


@dataclass
class ProjectionResult:
    points: list  # Sp(L_m, E) computed directly
    projected: list  # pi(Sp(L, E))
    agrees: bool


def project_spectrum(L: LiePresentation, m: int, full: SpectrumResult | None = None) -> ProjectionResult:
    """Check Sp(L_m, E) = pi(Sp(L, E)) for the ideal spanned by x_1..x_m."""
    sub, project = ideal_and_projection(L, m)
    if full is None:
        full = spectrum(L)
    direct = spectrum(sub).points
    projected = canonical_characters([project(f) for f in full.points], L.tol)
    agrees = len(direct) == len(projected) and all(
        all(la.scalars_close(a, b, L.tol) for a, b in zip(f, g))
        for f, g in zip(direct, projected))
    return ProjectionResult(direct, projected, agrees)
