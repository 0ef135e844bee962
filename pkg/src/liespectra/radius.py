"""Geometric and algebraic spectral radii of matrix tuples.

For a tuple T = (T_1, ..., T_n) the stacked operator ``x -> (T_1 x, ..., T_n x)``
maps l^p(d) into the l^p sum of n copies.  ``T^m`` is the n^m-tuple of all
length-m products in lexicographic index order, and the algebraic radius is
``inf_m ||T^m||_p^(1/m)``; every finite m gives an upper bound.

Exact norm engines exist for p in {1, 2, inf}.  Other p give an
:class:`Interval`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from . import linalg as la
from .lie import NILPOTENT, LieError, LiePresentation, as_tuple
from .linalg import DEFAULT_TOL, Tolerances, parse_p
from .scalars import exact_abs, exact_sqrt, gq
from .weights import BlockStructure, joint_point_spectrum, weight_decomposition

__all__ = [
    "Interval",
    "BudgetExceededError",
    "EmptyPointSpectrumError",
    "NotTriangularError",
    "NotApplicableError",
    "ProductEnumeration",
    "RadiusReport",
    "TheoremCheck",
    "operator_norm_stacked",
    "stacked_power_matrix",
    "gram_log_norms",
    "tuple_power_norm",
    "geometric_radius",
    "spectrum_max_radius",
    "algebraic_radius_estimate",
    "conjugate_tuple",
    "diagonal_nilpotent_split",
    "verify_main_theorem",
    "weight_radius",
]

DEFAULT_BUDGET = 10 ** 6
ZERO_FLOOR = 1e-12


class Interval(NamedTuple):
    lower: float
    upper: float


class BudgetExceededError(RuntimeError):
    pass


class EmptyPointSpectrumError(ArithmeticError):
    pass


class NotTriangularError(ValueError):
    pass


class NotApplicableError(LieError):
    pass


def _upper(v) -> float:
    return v.upper if isinstance(v, Interval) else v


def _sqrt_sum(squares):
    """Sum of square roots of nonnegative rationals.

    Exact (a Fraction) when every root is rational; otherwise the roots are
    summed in sorted order with fsum, so equal multisets of inputs always
    give the same float.
    """
    roots = [exact_sqrt(s) for s in squares]
    if all(isinstance(r, Fraction) for r in roots):
        return sum(roots, Fraction(0))
    return math.fsum(sorted(float(r) for r in roots))


def _abs_sum(values, weight=Fraction(1)):
    """Sum of the moduli of ``sqrt(weight) * z`` over exact scalars z."""
    return _sqrt_sum([weight * gq(z).norm() for z in values])


# one-step norms -------------------------------------------------------------------

def _max_row_sum(M: np.ndarray, weight=Fraction(1)):
    """Largest row sum of moduli of ``sqrt(weight) * M`` (weight only for exact M)."""
    if M.shape[0] == 0:
        return Fraction(0) if la.is_exact(M) else 0.0
    if la.is_exact(M):
        return max((_abs_sum(row, weight) for row in M), key=float)
    return float(np.max(np.sum(np.abs(M), axis=1)))


def _col_sums(M: np.ndarray) -> list:
    if la.is_exact(M):
        return [_abs_sum(M[:, c]) for c in range(M.shape[1])]
    return list(np.sum(np.abs(M), axis=0).astype(float))


def _p_norm_lower(S: np.ndarray, p: float, starts: int = 4, iters: int = 50) -> float:
    """Lower bound on ||S||_p by the dual power method, several starts."""
    S = la.to_float(S)
    rows, cols = S.shape
    if not np.any(S):
        return 0.0
    q = p / (p - 1.0)

    def dual(v, r):
        nrm = np.linalg.norm(v, r)
        if nrm == 0:
            return v
        mag = np.abs(v) / nrm
        phase = np.exp(1j * np.angle(v))
        return phase * mag ** (r - 1)

    best = max(np.linalg.norm(S[:, c], p) for c in range(cols))
    rng = np.random.default_rng(0)
    inits = [np.ones(cols, dtype=complex)] + [
        rng.standard_normal(cols) + 1j * rng.standard_normal(cols) for _ in range(starts - 1)]
    for x in inits:
        x = x / np.linalg.norm(x, p)
        for _ in range(iters):
            y = S @ x
            ny = np.linalg.norm(y, p)
            best = max(best, ny)
            if ny == 0:
                break
            z = S.conj().T @ dual(y, p)
            if np.linalg.norm(z, q) <= np.real(np.vdot(x, z)) * (1 + 1e-12):
                break
            x = dual(z, q)
            x = x / np.linalg.norm(x, p)
    return float(best)


def _interval_from_stack(S: np.ndarray, p: float) -> Interval:
    if S.size == 0:
        return Interval(0.0, 0.0)
    Sf = la.to_float(S)
    n1 = float(np.max(np.sum(np.abs(Sf), axis=0)))
    ninf = float(np.max(np.sum(np.abs(Sf), axis=1)))
    upper = n1 ** (1.0 / p) * ninf ** (1.0 - 1.0 / p)
    lower = min(_p_norm_lower(Sf, p), upper)
    return Interval(lower, upper)


def operator_norm_stacked(T: Sequence[np.ndarray], p, tol: Tolerances = DEFAULT_TOL):
    """||T||_p of the stacked operator.

    p = 1 and p = inf are exact on the exact backend; p = 2 is a float;
    other p give an Interval (dual power method / Riesz-Thorin).
    """
    T = as_tuple(T)
    p = parse_p(p)
    if math.isinf(p):
        return max(_max_row_sum(M) for M in T)
    if p == 1:
        sums = None
        for M in T:
            cs = _col_sums(M)
            sums = cs if sums is None else [a + b for a, b in zip(sums, cs)]
        return max(sums)
    if p == 2:
        G = sum(la.to_float(M).conj().T @ la.to_float(M) for M in T)
        return math.sqrt(la.lambda_max_hermitian(G, tol))
    return _interval_from_stack(np.vstack(T), p)


def stacked_power_matrix(T: Sequence[np.ndarray], m: int) -> np.ndarray:
    """The (n^m d) x d matrix stacking every length-m product in lex order."""
    T = as_tuple(T)
    blocks = []
    for idx in itertools.product(range(len(T)), repeat=m):
        P = T[idx[0]]
        for i in idx[1:]:
            P = P @ T[i]
        blocks.append(P)
    return np.vstack(blocks)


# Gram recursion (p = 2) -------------------------------------------------------------

def _vanishing_depth(mats: Sequence[np.ndarray]) -> int | None:
    """Smallest m with every length-m product zero, for exact input; else None.

    Tracks a basis of the span of length-m products.  If the products have
    not vanished by m = d they never do.
    """
    if not all(la.is_exact(X) for X in mats):
        return None
    d = mats[0].shape[0]
    span = list(mats)
    for m in range(1, d + 1):
        span = [X for X in span if any(X.flat)]
        if not span:
            return m
        cols = np.column_stack([X.reshape(-1) for X in span])
        span = [span[j] for j in la.independent_columns(cols)]
        span = [B @ X for B in span for X in mats]
    return None


def gram_log_norms(T: Sequence[np.ndarray], M: int, tol: Tolerances = DEFAULT_TOL) -> list[float]:
    """log ||T^m||_2 for m = 1..M via G_m = sum_i T_i^* G_{m-1} T_i.

    G is carried in square-root form G = F^* F, with F the R factor of the
    stacked products F T_i, so round-off cannot push G off the positive
    semidefinite cone.  F is renormalized by powers of two every step so
    large M neither overflows nor underflows.  Products that vanish exactly
    give -inf; on the exact backend the vanishing depth is found exactly,
    since round-off in F would otherwise leave small nonzero norms.
    """
    exact = as_tuple(T)
    zero_from = _vanishing_depth(exact)
    if zero_from is not None:
        M_nonzero = min(M, zero_from - 1)
        return gram_log_norms([la.to_float(x) for x in exact], M_nonzero, tol) + [-math.inf] * (M - M_nonzero)
    mats = [la.to_float(x) for x in exact]
    d = mats[0].shape[0]
    F = np.eye(d, dtype=complex)
    log_scale = 0.0
    out = []
    for _ in range(M):
        S = np.vstack([F @ X for X in mats])
        s = float(np.max(np.abs(S))) if S.size else 0.0
        if s == 0.0:
            out.extend([-math.inf] * (M - len(out)))
            break
        F = np.linalg.qr(S, mode="r")
        # rescale by a power of two so exact zeros stay exact
        _, e = math.frexp(float(np.max(np.abs(F))))
        F = F * 2.0 ** (-e)
        log_scale += e * math.log(2.0)
        top = float(np.linalg.svd(F, compute_uv=False)[0])
        out.append(math.log(top) + log_scale if top > 0 else -math.inf)
    return out


# product enumeration (p = 1, inf, general) --------------------------------------------

class ProductEnumeration:
    """Length-m products T_{i1}...T_{im}, grown on the right in lex order.

    With pruning, zero products are dropped and products differing by a
    scalar share one entry: the normalized matrix ``N`` (first nonzero entry
    equal to 1) and an aggregate of the scales ``s`` with ``P = s * phase * N``.
    The aggregate is ``sum s^p`` for finite p and ``max s`` for p = inf, which
    is all the p-norm of the stack needs.  On the exact backend with p = inf
    the aggregate holds ``max s^2`` instead, which stays rational for
    Gaussian entries, so the final norm is exact whenever it is rational.
    """

    def __init__(self, T: Sequence[np.ndarray], p, prune: bool = True,
                 budget: int = DEFAULT_BUDGET, tol: Tolerances = DEFAULT_TOL):
        self.T = as_tuple(T)
        self.p = parse_p(p)
        self.prune = prune
        self.budget = budget
        self.tol = tol
        self.exact = la.is_exact(self.T[0])
        self.depth = 0
        self.zeros_discarded = 0
        self.duplicates_merged = 0
        d = self.T[0].shape[0]
        one = Fraction(1) if self.exact else 1.0
        self.entries: list[list] = [[la.identity(d, self.exact), one]]
        self._index: dict = {}

    def _combine(self, a, b):
        if math.isinf(self.p):
            return max(a, b)
        return a + b

    def _weight(self, z):
        if self.exact:
            if math.isinf(self.p):
                return z.norm()
            if self.p == 1:
                return exact_abs(z)
        s = abs(complex(z))
        if math.isinf(self.p) or self.p == 1:
            return s
        return s ** self.p

    def _normalize(self, P: np.ndarray):
        flat = P.reshape(-1)
        if self.exact:
            pos = next((i for i, z in enumerate(flat) if z), None)
            if pos is None:
                return None, None
            z = flat[pos]
            return P * z.inverse(), z
        mags = np.abs(flat)
        pos = int(np.argmax(mags))
        if mags[pos] <= self.tol.zero_tol:
            return None, None
        z = flat[pos]
        return P / z, z

    def _key(self, N: np.ndarray):
        if self.exact:
            return tuple(N.reshape(-1))
        return tuple(np.round(N.reshape(-1).view(float), 9))

    def advance(self) -> None:
        """Move from depth m to depth m + 1."""
        new: list[list] = []
        index: dict = {}
        for N, w in self.entries:
            for X in self.T:
                P = N @ X
                if not self.prune:
                    new.append([P, w])
                    if len(new) > self.budget:
                        raise BudgetExceededError(f"more than {self.budget} products")
                    continue
                N2, z = self._normalize(P)
                if N2 is None:
                    self.zeros_discarded += 1
                    continue
                w2 = self._weight(z) * w
                key = self._key(N2)
                if key in index:
                    entry = new[index[key]]
                    entry[1] = self._combine(entry[1], w2)
                    self.duplicates_merged += 1
                    continue
                index[key] = len(new)
                new.append([N2, w2])
                if len(new) > self.budget:
                    raise BudgetExceededError(f"more than {self.budget} surviving products")
        self.entries = new
        self.depth += 1

    def norm(self):
        """||T^m||_p at the current depth."""
        if not self.entries:
            return Fraction(0) if self.exact else 0.0
        p = self.p
        if math.isinf(p):
            if not self.prune:
                return max(_max_row_sum(N) for N, _ in self.entries)
            if self.exact:
                # sqrt(w) stays inside the row sums, matching the unpruned products exactly
                return max((_max_row_sum(N, w) for N, w in self.entries), key=float)
            return max(w * _max_row_sum(N) for N, w in self.entries)
        if p == 1:
            total = None
            for N, w in self.entries:
                cs = [w * c for c in _col_sums(N)]
                total = cs if total is None else [a + b for a, b in zip(total, cs)]
            return max(total)
        if self.prune:
            S = np.vstack([float(w) ** (1.0 / p) * la.to_float(N) for N, w in self.entries])
        else:
            S = np.vstack([la.to_float(N) for N, _ in self.entries])
        return _interval_from_stack(S, p)


def tuple_power_norm(T: Sequence[np.ndarray], m: int, p, budget: int = DEFAULT_BUDGET,
                     prune: bool = True, tol: Tolerances = DEFAULT_TOL):
    """||T^m||_p: Gram recursion for p = 2, product enumeration otherwise."""
    if m < 1:
        raise la.InvalidParameterError("depth m must be >= 1")
    p = parse_p(p)
    if p == 2:
        return math.exp(gram_log_norms(T, m, tol)[-1])
    enum = ProductEnumeration(T, p, prune=prune, budget=budget, tol=tol)
    for _ in range(m):
        enum.advance()
    return enum.norm()


# radii -------------------------------------------------------------------------------------

def _max_norm(points, p):
    if not points:
        return None
    best = None
    for lam in points:
        v = la.vector_p_norm(lam, p)
        if best is None or v > best:
            best = v
    return best


def geometric_radius(T: Sequence[np.ndarray], p, tol: Tolerances = DEFAULT_TOL):
    """max |lambda|_p over the joint point spectrum."""
    pts = joint_point_spectrum(T, tol)
    if not pts:
        raise EmptyPointSpectrumError("tuple has no common eigenvector")
    return _max_norm(pts, p)


def spectrum_max_radius(L: LiePresentation, p):
    """max |lambda|_p over Sp(L, E) in coordinates of the basis."""
    from .koszul import spectrum

    pts = spectrum(L).points
    if not pts:
        raise EmptyPointSpectrumError("empty joint spectrum")
    return _max_norm(pts, p)


def _root(v, m: int):
    """v^(1/m), exact when v is a rational perfect m-th power."""
    if isinstance(v, Fraction):
        if v == 0:
            return Fraction(0)
        if m == 1:
            return v
        num, den = v.numerator, v.denominator
        rn, rd = round(num ** (1.0 / m)), round(den ** (1.0 / m))
        for a in (rn - 1, rn, rn + 1):
            for b in (rd - 1, rd, rd + 1):
                if a > 0 and b > 0 and a ** m == num and b ** m == den:
                    return Fraction(a, b)
        return math.exp((math.log(num) - math.log(den)) / m)
    v = float(v)
    return 0.0 if v == 0 else v ** (1.0 / m)


@dataclass
class RadiusReport:
    p: float
    norms: list = field(default_factory=list)  # (m, ||T^m||_p) pairs
    roots: list = field(default_factory=list)  # (m, ||T^m||_p^(1/m)) pairs
    rho_upper: object = None
    argmin_m: int | None = None
    r_p: object = None
    methods: list = field(default_factory=list)
    converged: bool = False
    max_depth: int = 0
    budget_exceeded: bool = False

    def rho_upper_at(self, M: int):
        """min over m <= M of ||T^m||^(1/m)."""
        vals = [r for m, r in self.roots if m <= M]
        return min(vals, key=float) if vals else None


def algebraic_radius_estimate(T: Sequence[np.ndarray], p, M: int, budget: int = DEFAULT_BUDGET,
                              tol: Tolerances = DEFAULT_TOL, with_geometric: bool = True) -> RadiusReport:
    """Upper bound min_{m <= M} ||T^m||_p^(1/m) with per-depth diagnostics.

    ``converged`` is set when doubling the depth from M // 2 to M changes the
    bound by less than 0.5 % (or the bound is exactly zero).
    """
    if M < 1:
        raise la.InvalidParameterError("max depth M must be >= 1")
    T = as_tuple(T)
    p = parse_p(p)
    report = RadiusReport(p=p, max_depth=M)
    if p == 2:
        for m, lg in enumerate(gram_log_norms(T, M, tol), start=1):
            if lg == -math.inf:
                report.norms.append((m, 0.0))
                report.roots.append((m, 0.0))
            else:
                report.norms.append((m, math.exp(lg) if lg < 700 else math.inf))
                report.roots.append((m, math.exp(lg / m)))
            report.methods.append("gram")
            if lg == -math.inf:
                break
    else:
        enum = ProductEnumeration(T, p, budget=budget, tol=tol)
        method = "enumeration" if p in (1.0, math.inf) else "interval"
        for m in range(1, M + 1):
            try:
                enum.advance()
            except BudgetExceededError:
                report.budget_exceeded = True
                break
            v = enum.norm()
            report.norms.append((m, v))
            report.roots.append((m, _root(_upper(v), m)))
            report.methods.append(method)
            if not enum.entries:
                break
    if report.norms:
        report.argmin_m, report.rho_upper = min(report.roots, key=lambda t: float(t[1]))
        last = report.norms[-1][0]
        half = report.rho_upper_at(max(last // 2, 1))
        full = report.rho_upper
        if float(full) == 0.0:
            report.converged = True
        elif last >= 2 and not report.budget_exceeded:
            report.converged = abs(float(half) - float(full)) < 0.005 * float(full)
    if with_geometric:
        report.r_p = geometric_radius(T, p, tol)
    return report


# similarity and splitting --------------------------------------------------------------------

def conjugate_tuple(T: Sequence[np.ndarray], U: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> tuple:
    """(U T_1 U^-1, ..., U T_n U^-1)."""
    T = as_tuple(T)
    Uinv = la.inverse(U, tol)
    return tuple(U @ X @ Uinv for X in T)


def diagonal_nilpotent_split(T, tol: Tolerances = DEFAULT_TOL) -> tuple[tuple, tuple]:
    """Split an upper-triangular tuple into diagonal and strictly upper parts."""
    mats = as_tuple(T.matrices if isinstance(T, BlockStructure) else T)
    D, N = [], []
    for X in mats:
        if not la.is_zero(np.tril(X, -1) if not la.is_exact(X) else _strict_lower(X), tol,
                          scale=float(np.max(np.abs(la.to_float(X))))):
            raise NotTriangularError("input matrix is not upper triangular")
        diag = la.zeros(*X.shape, la.is_exact(X))
        for i in range(X.shape[0]):
            diag[i, i] = X[i, i]
        D.append(diag)
        N.append(X - diag)
    return tuple(D), tuple(N)


def _strict_lower(X: np.ndarray) -> np.ndarray:
    d = X.shape[0]
    return np.array([X[i, j] for i in range(d) for j in range(i)], dtype=object)


# radius formula check -----------------------------------------------------------------------------------

@dataclass
class TheoremCheck:
    passed: bool
    r_p: object
    rho_upper: object
    gap: float
    lower_bound_ok: bool
    report: RadiusReport


def weight_radius(L: LiePresentation, p):
    """max |alpha|_p over the weights of a nilpotent algebra."""
    return _max_norm([s.weight for s in weight_decomposition(L)], p)


def verify_main_theorem(L: LiePresentation, p, M: int, tol: float = 0.05,
                        floor: float = ZERO_FLOOR, budget: int = DEFAULT_BUDGET) -> TheoremCheck:
    """Check r_p = rho_p for the basis tuple of a nilpotent algebra.

    Passes when the weight radius never exceeds the computed upper bound and
    the bound lies within ``tol`` (relative) of it; a zero radius requires the
    bound to reach zero, i.e. to fall below ``tol * floor``.
    """
    if L.kind != NILPOTENT:
        raise NotApplicableError(f"the radius formula is only claimed for nilpotent algebras, got {L.kind}")
    r = weight_radius(L, p)
    report = algebraic_radius_estimate(L.basis, p, M, budget=budget, tol=L.tol, with_geometric=False)
    report.r_p = r
    rho = report.rho_upper
    rf, rhof = float(r), float(rho)
    lower_ok = rf <= rhof * (1 + 1e-9) + floor
    gap = rhof - rf
    passed = lower_ok and gap <= tol * max(rf, floor) and not report.budget_exceeded
    return TheoremCheck(passed, r, rho, gap, lower_ok, report)
