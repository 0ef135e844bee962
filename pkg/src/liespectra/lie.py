"""Matrix Lie algebras in the opposite algebra.

Brackets are taken in L(E)^op, so ``bracket(A, B) = B @ A - A @ B``.  An
algebra is presented by an ordered basis of matrices together with its
structure constants ``C[a, b, h]`` defined by ``[x_a, x_b] = sum_h C[a, b, h] x_h``
(0-based indices throughout).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import linalg as la
from .linalg import DEFAULT_TOL, Tolerances
from .scalars import GaussianRational, gq

__all__ = [
    "NILPOTENT",
    "SOLVABLE",
    "NEITHER",
    "LieError",
    "NotClosedError",
    "LinearlyDependentError",
    "NotJordanHolderError",
    "LiePresentation",
    "as_tuple",
    "bracket",
    "verify_subalgebra",
    "lower_central_series",
    "derived_series",
    "derived_algebra",
    "jordan_holder_basis",
    "verify_jordan_holder",
    "ideal_and_projection",
    "common_flag",
]

NILPOTENT = "nilpotent"
SOLVABLE = "solvable"  # solvable, not nilpotent
NEITHER = "neither"


class LieError(ValueError):
    pass


class NotClosedError(LieError):
    pass


class LinearlyDependentError(LieError):
    pass


class NotJordanHolderError(LieError):
    pass


def as_tuple(matrices: Sequence) -> tuple[np.ndarray, ...]:
    """Validate an n-tuple of d x d matrices sharing one backend."""
    mats = tuple(np.asarray(m) for m in matrices)
    if not mats:
        raise LieError("a matrix tuple needs at least one matrix")
    d = mats[0].shape[0]
    exact = la.is_exact(mats[0])
    for m in mats:
        if m.ndim != 2 or m.shape != (d, d) or d < 1:
            raise LieError("all matrices must be square of one common dimension")
        if la.is_exact(m) != exact:
            raise LieError("matrices mix exact and float backends")
    return mats


def bracket(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Commutator in the opposite algebra: ``B A - A B``."""
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise LieError("bracket needs square matrices of equal dimension")
    return B @ A - A @ B


@dataclass(frozen=True, eq=False)
class LiePresentation:
    basis: tuple
    structure: np.ndarray
    kind: str
    jh_ordered: bool = False
    derived_index: int | None = None
    tol: Tolerances = DEFAULT_TOL

    @property
    def n(self) -> int:
        return len(self.basis)

    @property
    def d(self) -> int:
        return self.basis[0].shape[0]

    @property
    def exact(self) -> bool:
        return la.is_exact(self.basis[0])

    def c(self, h: int, i: int, j: int):
        """Structure constant with the 1-based convention ``[x_j, x_i] = sum_h c^h_ij x_h``."""
        return self.structure[j - 1, i - 1, h - 1]

    def is_character(self, f) -> bool:
        """True iff the functional with coordinates ``f`` vanishes on L^2."""
        vals = _apply_functional(self.structure, f)
        if self.exact and all(isinstance(v, (GaussianRational, int)) for v in f):
            return not any(vals)
        scale = max([1.0] + [abs(complex(v)) for v in f])
        return all(abs(complex(v)) <= self.tol.zero_tol * scale for v in vals)

    def coordinates(self, M: np.ndarray) -> np.ndarray:
        """Coordinates of a matrix in the basis (raises if M is outside L)."""
        return la.solve(_flat_basis(self.basis), M.reshape(-1), self.tol)


def _apply_functional(structure: np.ndarray, f) -> list:
    n = structure.shape[0]
    out = []
    for a in range(n):
        for b in range(a + 1, n):
            acc = 0
            for h in range(n):
                c = structure[a, b, h]
                if c:
                    acc = acc + c * f[h]
            out.append(acc)
    return out


def _flat_basis(mats: Sequence[np.ndarray]) -> np.ndarray:
    return np.stack([m.reshape(-1) for m in mats], axis=1)


def _span_basis(mats: Sequence[np.ndarray], tol: Tolerances) -> list[np.ndarray]:
    """Greedy left-to-right independent subset."""
    if not mats:
        return []
    cols = la.independent_columns(_flat_basis(mats), tol)
    return [mats[c] for c in cols]


def _in_span(M: np.ndarray, span: Sequence[np.ndarray], tol: Tolerances) -> bool:
    if not span:
        return la.is_zero(M, tol)
    A = _flat_basis(span)
    return la.rank(np.hstack([A, M.reshape(-1, 1)]), tol) == la.rank(A, tol)


def _structure_constants(basis, tol: Tolerances) -> np.ndarray:
    n = len(basis)
    A = _flat_basis(basis)
    exact = la.is_exact(basis[0])
    C = np.zeros((n, n, n), dtype=object if exact else complex)
    if exact:
        C.fill(gq(0))
    for a in range(n):
        for b in range(a + 1, n):
            br = bracket(basis[a], basis[b])
            try:
                coords = la.solve(A, br.reshape(-1), tol)
            except la.InconsistentSystemError:
                raise NotClosedError(
                    f"span is not closed under the bracket: [x_{a + 1}, x_{b + 1}] leaves it") from None
            C[a, b] = coords
            C[b, a] = -coords
    return C


def _combine(coeffs, basis):
    acc = None
    for c, m in zip(coeffs, basis):
        if not c:
            continue
        term = c * m
        acc = term if acc is None else acc + term
    if acc is None:
        return basis[0] * 0
    return acc


def _series(basis, tol: Tolerances, lower: bool) -> list[list[np.ndarray]]:
    series = [list(basis)]
    while True:
        prev = series[-1]
        if not prev:
            break
        left = basis if lower else prev
        brackets = [bracket(a, b) for a in left for b in prev]
        nxt = _span_basis([m for m in brackets if not la.is_zero(m, tol)], tol)
        if len(nxt) == len(prev):
            break
        series.append(nxt)
    return series


def lower_central_series(L: LiePresentation) -> list[list[np.ndarray]]:
    """C^1 = L, C^{k+1} = [L, C^k], each as a list of basis matrices.

    Stops at the zero subspace (nilpotent) or when the series stabilizes.
    """
    return _series(L.basis, L.tol, lower=True)


def derived_series(L: LiePresentation) -> list[list[np.ndarray]]:
    return _series(L.basis, L.tol, lower=False)


def derived_algebra(L: LiePresentation) -> list[np.ndarray]:
    """Basis of L^2 = [L, L]."""
    series = derived_series(L)
    return series[1] if len(series) > 1 else list(L.basis)


def _classify(basis, tol: Tolerances) -> str:
    if not _series(basis, tol, lower=True)[-1]:
        return NILPOTENT
    if not _series(basis, tol, lower=False)[-1]:
        return SOLVABLE
    return NEITHER


def verify_subalgebra(basis: Sequence, tol: Tolerances = DEFAULT_TOL) -> LiePresentation:
    """Check closure under the bracket and build a presentation.

    The returned presentation is flagged ``jh_ordered`` when the given order
    already is a Jordan-Hölder basis.
    """
    basis = as_tuple(basis)
    if la.rank(_flat_basis(basis), tol) < len(basis):
        raise LinearlyDependentError("basis matrices are linearly dependent")
    C = _structure_constants(basis, tol)
    L = LiePresentation(basis=basis, structure=C, kind=_classify(basis, tol), tol=tol)
    if L.kind != NEITHER and verify_jordan_holder(L):
        L = replace(L, jh_ordered=True, derived_index=len(derived_algebra(L)))
    return L


def verify_jordan_holder(L: LiePresentation) -> bool:
    """Check the flag conditions on the current basis order.

    Nilpotent: ``[x_j, x_i]`` lies in span(x_1..x_{i-1}) for i < j.
    Solvable: it lies in span(x_1..x_i).  In both cases L^2 must be the span
    of an initial segment of the basis.
    """
    if L.kind == NEITHER:
        return False
    n = L.n
    offset = 0 if L.kind == NILPOTENT else 1
    for i in range(n):
        for j in range(i + 1, n):
            for h in range(i + offset, n):
                if not la.scalar_is_zero(L.structure[j, i, h], L.tol):
                    return False
    k = len(derived_algebra(L))
    prefix = list(L.basis[:k])
    return all(_in_span(m, prefix, L.tol) for m in derived_algebra(L))


def _extend(current: list, candidates: Sequence, target_dim: int, tol: Tolerances) -> list:
    out = list(current)
    for m in candidates:
        if len(out) == target_dim:
            break
        if not _in_span(m, out, tol):
            out.append(m)
    return out


def common_flag(mats: Sequence[np.ndarray], tol: Tolerances = DEFAULT_TOL,
                eigen: Sequence | None = None) -> np.ndarray:
    """Basis ``P`` of C^k whose leading spans are invariant under every matrix.

    Columns of ``P`` give a complete invariant flag, so each ``P^-1 M P`` is
    upper triangular.  The matrices must be simultaneously triangularizable
    (e.g. a solvable Lie algebra).  With ``eigen`` given, the flag is built
    from iterated joint kernels of ``M_i - eigen[i]``.
    """
    mats = list(mats)
    k = mats[0].shape[0]
    exact = la.is_exact(mats[0])
    chosen = la.zeros(k, 0, exact)
    while chosen.shape[1] < k:
        P = _complete(chosen, exact, tol)
        Pinv = la.inverse(P, tol)
        m = chosen.shape[1]
        quots = [(Pinv @ M @ P)[m:, m:] for M in mats]
        if eigen is not None:
            K = _joint_kernel(quots, list(eigen), tol)
        else:
            K = _common_eigenvector(quots, tol)
        if K is None or K.shape[1] == 0:
            raise LieError("matrices are not simultaneously triangularizable")
        chosen = np.hstack([chosen, P[:, m:] @ K])
    return chosen


def _complete(cols: np.ndarray, exact: bool, tol: Tolerances) -> np.ndarray:
    """Extend independent columns to a basis with standard basis vectors."""
    k = cols.shape[0]
    eye = la.identity(k, exact)
    out = cols
    r = cols.shape[1]
    for i in range(k):
        if r == k:
            break
        trial = np.hstack([out, eye[:, i:i + 1]])
        if la.rank(trial, tol) > r:
            out = trial
            r += 1
    return out


def _joint_kernel(mats, values, tol: Tolerances):
    k = mats[0].shape[0]
    exact = la.is_exact(mats[0])
    K = la.identity(k, exact)
    for M, lam in zip(mats, values):
        if K.shape[1] == 0:
            break
        A = (M - lam * la.identity(k, exact)) @ K
        K = K @ la.kernel_basis(A, tol, la.operator_scale(M))
    return K


def _common_eigenvector(mats, tol: Tolerances):
    """One common eigenvector (as a k x 1 matrix) found by backtracking."""
    k = mats[0].shape[0]
    exact = la.is_exact(mats[0])
    spectra = [[lam for lam, _ in la.eigenvalues_clustered(M, tol)] for M in mats]

    def search(i, K):
        if i == len(mats):
            return K[:, :1]
        for lam in spectra[i]:
            A = (mats[i] - lam * la.identity(k, exact)) @ K
            K2 = K @ la.kernel_basis(A, tol, la.operator_scale(mats[i]))
            if K2.shape[1]:
                hit = search(i + 1, K2)
                if hit is not None:
                    return hit
        return None

    return search(0, la.identity(k, exact))


def jordan_holder_basis(L: LiePresentation) -> LiePresentation:
    """Reorder (and, where needed, recombine) the basis into a Jordan-Hölder basis.

    Nilpotent algebras refine the lower central series from the deepest term
    up.  Solvable algebras first find a complete flag of ideals inside L^2
    (common eigenvectors of the adjoint action, by Lie's theorem) and then
    extend from L^2 to L.  Extension vectors are taken greedily in input order.
    """
    if L.kind == NEITHER:
        raise LieError("Jordan-Hölder bases exist only for solvable algebras")
    if L.jh_ordered:
        return L
    tol = L.tol
    if L.kind == NILPOTENT:
        series = lower_central_series(L)
        new: list = []
        for term in reversed(series):
            new = _extend(new, term, len(term), tol)
    else:
        derived = derived_algebra(L)
        new = _ideal_flag(L, derived)
        new = _extend(new, L.basis, L.n, tol)
    new = [_prefer_generator(L, m) for m in new]
    M = verify_subalgebra(new, tol)
    if M.kind != L.kind or not verify_jordan_holder(M):
        raise LieError("flag construction failed to produce a Jordan-Hölder basis")
    return replace(M, jh_ordered=True, derived_index=len(derived_algebra(M)))


def _prefer_generator(L: LiePresentation, M: np.ndarray) -> np.ndarray:
    # a multiple of an input element is replaced by that element (same flag)
    coords = L.coordinates(M)
    nonzero = [i for i, c in enumerate(coords) if not la.scalar_is_zero(c, L.tol)]
    return L.basis[nonzero[0]] if len(nonzero) == 1 else M


def _ideal_flag(L: LiePresentation, derived: list) -> list:
    """Basis of L^2 whose prefixes are ideals of L."""
    if not derived:
        return []
    A = _flat_basis(derived)
    # matrices of ad(x) restricted to L^2, in the coordinates of `derived`
    ads = []
    for x in L.basis:
        cols = [la.solve(A, bracket(x, y).reshape(-1), L.tol) for y in derived]
        ads.append(np.stack(cols, axis=1))
    P = common_flag(ads, L.tol)
    return [_combine(P[:, c], derived) for c in range(P.shape[1])]


def ideal_and_projection(L: LiePresentation, m: int):
    """The ideal spanned by the first ``m`` basis elements and the coordinate
    projection sending a character of L to its restriction on that ideal."""
    if not L.jh_ordered:
        raise NotJordanHolderError("presentation is not Jordan-Hölder ordered")
    if not 1 <= m <= L.n:
        raise la.InvalidParameterError(f"ideal index m must lie in 1..{L.n}")
    sub = verify_subalgebra(L.basis[:m], L.tol)
    if not sub.jh_ordered:
        sub = replace(sub, jh_ordered=verify_jordan_holder(sub),
                      derived_index=len(derived_algebra(sub)))

    def project(f):
        return tuple(f[:m])

    return sub, project
