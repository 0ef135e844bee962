"""Dense complex linear algebra over two scalar backends.

Matrices are numpy arrays.  The backend is carried by the dtype:

* ``object`` arrays hold :class:`~liespectra.scalars.GaussianRational`
  entries and every operation is exact;
* ``complex128`` arrays are floating point, and every zero test goes through
  an explicit :class:`Tolerances` value.

Ordinary operators (``@``, ``+``, ``-``, scalar multiplication) work on both.
Only the routines below need to know which backend is active.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .scalars import GaussianRational, exact_abs, exact_sqrt, gq

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "InvalidParameterError",
    "IrrationalEigenvalueError",
    "SingularMatrixError",
    "InconsistentSystemError",
    "NotHermitianError",
    "exact_matrix",
    "float_matrix",
    "is_exact",
    "to_float",
    "to_exact",
    "identity",
    "zeros",
    "is_zero",
    "matrices_equal",
    "rank",
    "kernel_basis",
    "rref",
    "independent_columns",
    "solve",
    "inverse",
    "charpoly",
    "eigenvalues_clustered",
    "lambda_max_hermitian",
    "vector_p_norm",
    "parse_p",
    "scalar_is_zero",
    "scalars_close",
]


class InvalidParameterError(ValueError):
    pass


class IrrationalEigenvalueError(ArithmeticError):
    """The exact backend met a characteristic root outside Q(i)."""


class SingularMatrixError(ArithmeticError):
    pass


class InconsistentSystemError(ArithmeticError):
    pass


class NotHermitianError(ValueError):
    pass


@dataclass(frozen=True)
class Tolerances:
    rank_tol: float = 1e-9
    eig_cluster_tol: float = 1e-7
    zero_tol: float = 1e-10

    def __post_init__(self):
        if min(self.rank_tol, self.eig_cluster_tol, self.zero_tol) < 0:
            raise InvalidParameterError("tolerances must be nonnegative")


DEFAULT_TOL = Tolerances()


# construction ---------------------------------------------------------------

def exact_matrix(rows) -> np.ndarray:
    """Build an exact matrix (or vector) from nested sequences."""
    arr = np.asarray(rows, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = gq(v)
    return out


def float_matrix(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=object)
    if arr.dtype == object and arr.size and isinstance(arr.flat[0], GaussianRational):
        return to_float(arr)
    return np.asarray(rows, dtype=complex)


def is_exact(M: np.ndarray) -> bool:
    return M.dtype == object


def to_float(M: np.ndarray) -> np.ndarray:
    if not is_exact(M):
        return np.asarray(M, dtype=complex)
    out = np.empty(M.shape, dtype=complex)
    for idx, v in np.ndenumerate(M):
        out[idx] = complex(v)
    return out


def to_exact(M: np.ndarray) -> np.ndarray:
    if is_exact(M):
        return M
    return exact_matrix(M.tolist())


def identity(d: int, exact: bool) -> np.ndarray:
    if not exact:
        return np.eye(d, dtype=complex)
    out = zeros(d, d, True)
    one = gq(1)
    for i in range(d):
        out[i, i] = one
    return out


def zeros(rows: int, cols: int, exact: bool) -> np.ndarray:
    if not exact:
        return np.zeros((rows, cols), dtype=complex)
    out = np.empty((rows, cols), dtype=object)
    zero = gq(0)
    out.fill(zero)
    return out


def operator_scale(M: np.ndarray) -> float:
    """Largest entry modulus of a float matrix (0 for exact input)."""
    if is_exact(M) or M.size == 0:
        return 0.0
    return float(np.max(np.abs(M)))


def _scale(M: np.ndarray) -> float:
    if M.size == 0:
        return 0.0
    return float(np.max(np.abs(to_float(M))))


def scalar_is_zero(z, tol: Tolerances = DEFAULT_TOL, scale: float = 1.0) -> bool:
    if isinstance(z, GaussianRational):
        return not z
    return abs(z) <= tol.zero_tol * max(1.0, scale)


def scalars_close(a, b, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Equality authority for eigenvalues and character coordinates."""
    if isinstance(a, GaussianRational) and isinstance(b, GaussianRational):
        return a == b
    return abs(complex(a) - complex(b)) < tol.eig_cluster_tol


def is_zero(M: np.ndarray, tol: Tolerances = DEFAULT_TOL, scale: float = 1.0) -> bool:
    if M.size == 0:
        return True
    if is_exact(M):
        return not any(M.flat)
    return float(np.max(np.abs(M))) <= tol.zero_tol * max(1.0, scale)


def matrices_equal(A: np.ndarray, B: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    if A.shape != B.shape:
        return False
    if is_exact(A) and is_exact(B):
        return bool(np.all(A == B))
    return is_zero(to_float(A) - to_float(B), tol, scale=max(_scale(A), _scale(B)))


# exact elimination ------------------------------------------------------------

def _integer_rows(M: np.ndarray) -> np.ndarray:
    """Scale each row of an exact matrix to Gaussian integers.

    Returns an integer object array; complex input is realified as
    ``[[A, -B], [B, A]]``, whose rank is twice the complex rank.
    """
    rows, cols = M.shape
    re = np.empty((rows, cols), dtype=object)
    im = np.empty((rows, cols), dtype=object)
    complex_seen = False
    for i in range(rows):
        lcm = 1
        for z in M[i]:
            lcm = lcm * z._den // math.gcd(lcm, z._den)
        for j, z in enumerate(M[i]):
            f = lcm // z._den
            re[i, j] = z._re * f
            im[i, j] = z._im * f
            if z._im:
                complex_seen = True
    if not complex_seen:
        return re
    return np.block([[re, -im], [im, re]])


def _bareiss_rank(A: np.ndarray) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    A = A.copy()
    rows, cols = A.shape
    r = 0
    prev = 1
    for c in range(cols):
        if r == rows:
            break
        nz = [i for i in range(r, rows) if A[i, c] != 0]
        if not nz:
            continue
        i = nz[0]
        if i != r:
            A[[r, i]] = A[[i, r]]
        p = A[r, c]
        if r + 1 < rows:
            below = A[r + 1:, c:]
            col = below[:, 0].copy()
            A[r + 1:, c:] = (p * below - np.multiply.outer(col, A[r, c:])) // prev
        prev = p
        r += 1
    return r


def rref(M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of an exact matrix and its pivot columns."""
    if not is_exact(M):
        raise TypeError("rref is only defined for the exact backend")
    A = M.copy()
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        i = next((i for i in range(r, rows) if A[i, c]), None)
        if i is None:
            continue
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = A[r, c].inverse()
        A[r, c:] = A[r, c:] * inv
        col = A[:, c].copy()
        for k in range(rows):
            if k != r and col[k]:
                A[k, c:] = A[k, c:] - col[k] * A[r, c:]
        pivots.append(c)
        r += 1
    return A, pivots


# rank / kernel ----------------------------------------------------------------

def rank(M: np.ndarray, tol: Tolerances = DEFAULT_TOL, scale: float = 0.0) -> int:
    """Matrix rank.

    Exact matrices are scaled to Gaussian-integer rows and reduced by
    fraction-free elimination; float matrices count singular values above
    ``rank_tol * max(sigma_max, scale)``.  Pass ``scale`` when M is built
    from an operator of known size, so a matrix made only of rounding
    noise counts as zero.
    """
    if M.ndim != 2:
        raise InvalidParameterError("rank expects a 2-d array")
    if M.size == 0:
        return 0
    if is_exact(M):
        A = _integer_rows(M)
        r = _bareiss_rank(A)
        return r if A.shape == M.shape else r // 2
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol.rank_tol * max(s[0], scale)))


def kernel_basis(M: np.ndarray, tol: Tolerances = DEFAULT_TOL, scale: float = 0.0) -> np.ndarray:
    """Basis of the null space, returned as the columns of a matrix.

    ``scale`` plays the same role as in :func:`rank`.
    """
    rows, cols = M.shape
    if is_exact(M):
        R, pivots = rref(M)
        free = [c for c in range(cols) if c not in set(pivots)]
        K = zeros(cols, len(free), True)
        one = gq(1)
        for k, fc in enumerate(free):
            K[fc, k] = one
            for r, pc in enumerate(pivots):
                K[pc, k] = -R[r, fc]
        return K
    if rows == 0:
        return np.eye(cols, dtype=complex)
    _, s, vh = np.linalg.svd(M)
    r = 0 if s.size == 0 or s[0] == 0 else int(np.sum(s > tol.rank_tol * max(s[0], scale)))
    return vh[r:].conj().T.copy()


def smallest_singular_subspace(M: np.ndarray, dim: int) -> np.ndarray:
    """Orthonormal columns spanning the right singular vectors of the ``dim``
    smallest singular values (the numerical kernel when its size is known)."""
    Mf = to_float(M)
    _, _, vh = np.linalg.svd(Mf)
    return vh[Mf.shape[1] - dim:].conj().T.copy()


def independent_columns(M: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> list[int]:
    """Indices of a greedy (left-to-right) maximal independent set of columns."""
    if is_exact(M):
        return rref(M)[1]
    chosen: list[int] = []
    current = 0
    for c in range(M.shape[1]):
        r = rank(M[:, chosen + [c]], tol)
        if r > current:
            chosen.append(c)
            current = r
    return chosen


def solve(A: np.ndarray, B: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Solve ``A X = B``; raise if the system has no solution.

    Underdetermined systems return the solution with free variables at 0.
    """
    vec = B.ndim == 1
    if vec:
        B = B.reshape(-1, 1)
    if is_exact(A) and is_exact(B):
        n = A.shape[1]
        R, pivots = rref(np.hstack([A, B]))
        if any(p >= n for p in pivots):
            raise InconsistentSystemError("linear system has no solution")
        X = zeros(n, B.shape[1], True)
        for r, pc in enumerate(pivots):
            X[pc] = R[r, n:]
    else:
        Af, Bf = to_float(A), to_float(B)
        X, *_ = np.linalg.lstsq(Af, Bf, rcond=None)
        scale = max(_scale(Af) * max(_scale(X), 1.0), _scale(Bf), 1.0)
        if float(np.max(np.abs(Af @ X - Bf), initial=0.0)) > tol.rank_tol * scale:
            raise InconsistentSystemError("linear system has no solution")
    return X[:, 0] if vec else X


def inverse(M: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    d = M.shape[0]
    if M.shape != (d, d):
        raise InvalidParameterError("inverse of a non-square matrix")
    if rank(M, tol) < d:
        raise SingularMatrixError("matrix is singular")
    if is_exact(M):
        return solve(M, identity(d, True), tol)
    return np.linalg.inv(M)


# eigenvalues ------------------------------------------------------------------

def charpoly(M: np.ndarray) -> list:
    """Characteristic polynomial det(tI - M), coefficients lowest degree first.

    Faddeev-LeVerrier recursion; exact on the exact backend.
    """
    d = M.shape[0]
    exact = is_exact(M)
    one = gq(1) if exact else 1.0
    coeffs = [None] * (d + 1)
    coeffs[d] = one
    N = zeros(d, d, exact)
    eye = identity(d, exact)
    for k in range(1, d + 1):
        N = M @ N + coeffs[d - k + 1] * eye
        tr = sum((M @ N).diagonal(), gq(0) if exact else 0.0)
        coeffs[d - k] = tr * (gq(Fraction(-1, k)) if exact else -1.0 / k)
    return coeffs


def _poly_trim(p):
    p = list(p)
    while len(p) > 1 and not p[-1]:
        p.pop()
    return p


def _poly_divmod(num, den):
    num = _poly_trim(num)
    den = _poly_trim(den)
    if len(den) == 1 and not den[0]:
        raise ZeroDivisionError("polynomial division by zero")
    q = [gq(0)] * max(len(num) - len(den) + 1, 1)
    r = list(num)
    lead_inv = den[-1].inverse()
    while len(r) >= len(den) and any(r):
        shift = len(r) - len(den)
        c = r[-1] * lead_inv
        q[shift] = c
        for i, dc in enumerate(den):
            r[shift + i] = r[shift + i] - c * dc
        r.pop()
        r = _poly_trim(r) if r else [gq(0)]
        if len(r) < len(den):
            break
    return _poly_trim(q), _poly_trim(r) if r else [gq(0)]


def _poly_gcd(a, b):
    a, b = _poly_trim(a), _poly_trim(b)
    while len(b) > 1 or b[0]:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    inv = a[-1].inverse()
    return [c * inv for c in a]


def _poly_eval(p, x):
    acc = gq(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _rational_guesses(x: float, bound: int):
    seen = set()
    fx = Fraction(x)
    b = 1
    while True:
        cand = fx.limit_denominator(b)
        if cand not in seen:
            seen.add(cand)
            yield cand
        if b >= bound:
            break
        b = min(b * 4, bound)


def _exact_roots(poly) -> list[tuple[GaussianRational, int]]:
    """Roots in Q(i) of an exact polynomial with multiplicities.

    Floating-point roots of the square-free part only propose candidates;
    every accepted root is verified by exact evaluation.
    """
    poly = _poly_trim(poly)
    deg = len(poly) - 1
    if deg == 0:
        return []
    deriv = [c * k for k, c in enumerate(poly)][1:]
    g = _poly_gcd(poly, deriv)
    sqfree, _ = _poly_divmod(poly, g)
    sqfree_deg = len(sqfree) - 1
    lcm = 1
    for c in sqfree:
        lcm = lcm * c._den // math.gcd(lcm, c._den)
    lead = sqfree[-1] * lcm
    bound = max(10 ** 6, int(lead.norm()) + 1)
    approx = np.roots([complex(c) for c in reversed(sqfree)]) if sqfree_deg else []
    roots: list[GaussianRational] = []
    for z in approx:
        found = None
        for re in _rational_guesses(z.real, bound):
            for im in _rational_guesses(z.imag, bound):
                cand = GaussianRational.from_parts(re, im)
                if cand not in roots and not _poly_eval(sqfree, cand):
                    found = cand
                    break
            if found is not None:
                break
        if found is None:
            raise IrrationalEigenvalueError(
                f"characteristic root near {z:.6g} is not a Gaussian rational")
        roots.append(found)
    out = []
    remaining = poly
    for r in roots:
        lin = [-r, gq(1)]
        mult = 0
        while True:
            q, rem = _poly_divmod(remaining, lin)
            if len(rem) == 1 and not rem[0]:
                remaining = q
                mult += 1
            else:
                break
        out.append((r, mult))
    if sum(m for _, m in out) != deg:
        raise IrrationalEigenvalueError("characteristic polynomial does not split over Q(i)")
    return out


def _cluster(values: Sequence[complex], radius: float) -> list[tuple[complex, int]]:
    """Single-linkage clustering; each cluster reported by centroid and size."""
    values = list(values)
    parent = list(range(len(values)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if abs(values[i] - values[j]) <= radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[complex]] = {}
    for i, v in enumerate(values):
        groups.setdefault(find(i), []).append(v)
    out = [(complex(np.mean(g)), len(g)) for g in groups.values()]
    return out


def _sort_key(z):
    if isinstance(z, GaussianRational):
        return (float(z.real), float(z.imag))
    return (round(z.real, 9), round(z.imag, 9))


def eigenvalues_clustered(M: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> list[tuple[object, int]]:
    """Distinct eigenvalues with algebraic multiplicities, sorted by (re, im).

    The float backend merges eigenvalues within a radius of
    ``max(eig_cluster_tol, (1000 eps) ** (1/d))`` times the matrix scale, so
    that a Jordan block of size up to ``d`` perturbed by rounding (including
    error carried in from earlier restrictions) stays one cluster.
    """
    d = M.shape[0]
    if M.shape != (d, d):
        raise InvalidParameterError("eigenvalues of a non-square matrix")
    if d == 0:
        return []
    if is_exact(M):
        out = _exact_roots(charpoly(M))
    else:
        vals = np.linalg.eigvals(M)
        scale = max(1.0, float(np.max(np.abs(M))))
        radius = max(tol.eig_cluster_tol, (1000 * np.finfo(float).eps) ** (1.0 / d)) * scale
        out = _cluster(vals, radius)
    return sorted(out, key=lambda t: _sort_key(t[0]))


def lambda_max_hermitian(M: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> float:
    """Largest eigenvalue of a Hermitian positive semidefinite matrix."""
    Mf = to_float(M)
    if Mf.shape[0] == 0:
        return 0.0
    scale = max(1.0, float(np.max(np.abs(Mf))))
    if not is_zero(Mf - Mf.conj().T, tol, scale):
        raise NotHermitianError("matrix is not Hermitian")
    top = float(np.linalg.eigvalsh(Mf)[-1])
    return max(top, 0.0)


# norms --------------------------------------------------------------------------

def parse_p(p) -> float:
    """Normalize a norm index: numbers >= 1, or ``inf``/``"inf"``."""
    if isinstance(p, str):
        text = p.strip().lower()
        p = math.inf if text in ("inf", "infinity", "oo") else float(text)
    if isinstance(p, float) and math.isinf(p) and p > 0:
        return math.inf
    p = float(p)
    if math.isnan(p) or p < 1:
        raise InvalidParameterError(f"norm index must satisfy p >= 1, got {p}")
    return p


def vector_p_norm(x, p):
    """The usual p-norm of a complex vector.

    Exact inputs give a Fraction whenever the value is rational
    (always for p = inf and p = 1 with rational moduli, sometimes for p = 2).
    """
    p = parse_p(p)
    xs = list(np.asarray(x, dtype=object).ravel()) if isinstance(x, np.ndarray) else list(x)
    if not xs:
        return 0
    exact = all(isinstance(v, (GaussianRational, int, Fraction)) for v in xs)
    if exact:
        xs = [gq(v) for v in xs]
        if math.isinf(p):
            return max(exact_abs(v) for v in xs)
        if p == 2:
            return exact_sqrt(sum((v.norm() for v in xs), Fraction(0)))
        mods = [exact_abs(v) for v in xs]
        if p == 1:
            return sum(mods, Fraction(0))
        mods = [float(m) for m in mods]
    else:
        mods = [abs(complex(v)) for v in xs]
    if math.isinf(p):
        return max(mods)
    if p == 1:
        return float(sum(mods))
    top = max(mods)
    if top == 0:
        return 0.0
    return top * sum((m / top) ** p for m in mods) ** (1.0 / p)
