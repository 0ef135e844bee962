"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line (printed in the pytest terminal summary)
and then asserts, so a failed criterion stays red.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np
from conftest import all_presentations, family, random_character

from liespectra import linalg as la
from liespectra.generators import heisenberg_fixture, solvable_example
from liespectra.koszul import (
    boundary_matrix,
    is_in_spectrum,
    project_spectrum,
    spectrum,
)
from liespectra.radius import (
    ProductEnumeration,
    algebraic_radius_estimate,
    geometric_radius,
    gram_log_norms,
    spectrum_max_radius,
    stacked_power_matrix,
    tuple_power_norm,
    verify_main_theorem,
)
from liespectra.scalars import gq
from liespectra.weights import (
    canonical_characters,
    joint_point_spectrum,
    weight_decomposition,
)

RESULTS = []


def record(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def q(*vals):
    return tuple(gq(v) for v in vals)


def test_criterion_1_first_example():
    start = time.perf_counter()
    fx = solvable_example("L1")
    L = fx.presentation
    sigma = joint_point_spectrum(L.basis)
    sp = spectrum(L).points
    r = geometric_radius(L.basis, "inf")
    smax = spectrum_max_radius(L, "inf")
    rep = algebraic_radius_estimate(L.basis, "inf", 40, with_geometric=False)
    elapsed = time.perf_counter() - start
    closed_form = all(math.isclose(float(root), 2 ** (2 / m - 1), rel_tol=1e-12) for m, root in rep.roots)
    ok = (sigma == [q(0, "-1/2")] and sp == [q(0, "-3/2"), q(0, "1/2")]
          and r == Fraction(1, 2) and smax == Fraction(3, 2)
          and abs(float(rep.rho_upper) - 0.5) <= 0.04 * 0.5 and closed_form and elapsed < 1.0)
    record(1, ok, f"L1 sigma_pt={sigma}, Sp={sp}, r_inf={r}, max_sp={smax}, "
                  f"rho_upper(M=40)={float(rep.rho_upper):.5f}, closed form per m={closed_form}, {elapsed:.2f}s")


def test_criterion_2_second_example():
    L = solvable_example("L2").presentation
    sigma = joint_point_spectrum(L.basis)
    sp = spectrum(L).points
    r = geometric_radius(L.basis, "inf")
    smax = spectrum_max_radius(L, "inf")
    rep = algebraic_radius_estimate(L.basis, "inf", 20, with_geometric=False)
    ok = (sigma == [q(0, 2)] and sp == [q(0, 1), q(0, 3)] and r == 2 and smax == 3
          and rep.roots[0] == (1, Fraction(3)) and rep.rho_upper == Fraction(3) and rep.argmin_m == 1)
    record(2, ok, f"L2 sigma_pt={sigma}, Sp={sp}, r_inf={r}, rho at m=1 is {rep.roots[0][1]!r}, max_sp={smax}")


def test_criterion_3_third_example():
    L = solvable_example("L3").presentation
    r = geometric_radius(L.basis, "inf")
    smax = spectrum_max_radius(L, "inf")
    rho = float(algebraic_radius_estimate(L.basis, "inf", 40, with_geometric=False).rho_upper)
    ok = (r == Fraction(1, 3) and smax == Fraction(4, 3) and abs(rho - 2 / 3) <= 0.02 * 2 / 3
          and float(r) < rho < float(smax))
    record(3, ok, f"L3 r_inf={r}, rho_upper(M=40)={rho:.5f}, max_sp={smax}")


def test_criterion_4_radius_formula_p2():
    start = time.perf_counter()
    fixtures = family(50)
    build = time.perf_counter() - start
    start = time.perf_counter()
    worst, failures, below = 0.0, [], []
    for fx in fixtures:
        check = verify_main_theorem(fx.presentation, 2, 4096)
        r, rho = float(check.r_p), float(check.rho_upper)
        if r == 0:
            good = rho == 0
        else:
            good = rho - r <= 0.05 * r
            worst = max(worst, (rho - r) / r)
        if rho < r and not check.lower_bound_ok:
            below.append(fx.id)
        if not (good and check.lower_bound_ok):
            failures.append(fx.id)
    elapsed = time.perf_counter() - start
    ok = not failures and not below and elapsed < 60
    record(4, ok, f"50 nilpotent fixtures, p=2, M=4096: worst relative gap {worst:.4%}, "
                  f"failures={failures}, below r={below}, {elapsed:.1f}s (+{build:.1f}s construction)")


def test_criterion_5_spectrum_equals_weights():
    rng = np.random.default_rng(5)
    mismatched, accepted = [], []
    for fx in family(50):
        L = fx.presentation
        weights = canonical_characters([s.weight for s in weight_decomposition(L)])
        if spectrum(L).points != weights or weights != fx.expected["weights"]:
            mismatched.append(fx.id)
        tried = 0
        while tried < 10:
            base = weights[int(rng.integers(len(weights)))]
            delta = random_character(L, rng)
            if not any(delta):
                continue
            f = tuple(a + gq("1/2") * b for a, b in zip(base, delta))
            if f in weights:
                continue
            tried += 1
            if is_in_spectrum(L, f):
                accepted.append((fx.id, f))
    ok = not mismatched and not accepted
    record(5, ok, f"50 fixtures: Sp == weights except {mismatched}; 500 perturbed characters, "
                  f"{len(accepted)} wrongly accepted")


def test_criterion_6_complex_properties():
    rng = np.random.default_rng(6)
    fixtures = all_presentations()
    nonzero, checked = [], 0
    for L in fixtures:
        for _ in range(20):
            f = random_character(L, rng)
            for p in range(2, L.n + 1):
                prod = boundary_matrix(L, f, p - 1) @ boundary_matrix(L, f, p)
                checked += 1
                if any(prod.flat):
                    nonzero.append(L)
    bad_projection = 0
    prefixes = 0
    for L in fixtures:
        full = spectrum(L)
        for m in range(1, L.n + 1):
            prefixes += 1
            if not project_spectrum(L, m, full).agrees:
                bad_projection += 1
    ok = not nonzero and bad_projection == 0
    record(6, ok, f"{len(fixtures)} fixtures: {checked} compositions d∘d exactly zero "
                  f"(failures {len(nonzero)}); projection property on {prefixes} prefixes, failures {bad_projection}")


def _pruned_vs_unpruned(L, limit=10 ** 4, max_m=12):
    n = L.n
    pruned = ProductEnumeration(L.basis, "inf", prune=True)
    raw = ProductEnumeration(L.basis, "inf", prune=False, budget=limit + 1)
    compared = 0
    for m in range(1, max_m + 1):
        if n ** m > limit:
            break
        pruned.advance()
        raw.advance()
        compared += 1
        if pruned.norm() != raw.norm():
            return False, compared
    return True, compared


def test_criterion_7_norm_engines():
    rng = np.random.default_rng(7)
    gram_worst = 0.0
    for k in range(20):
        n, d = int(rng.integers(1, 4)), int(rng.integers(1, 5))
        T = tuple(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)) for _ in range(n))
        logs = gram_log_norms(T, 4)
        for m in range(1, 5):
            ref = np.linalg.norm(stacked_power_matrix(T, m), 2)
            gram_worst = max(gram_worst, abs(math.exp(logs[m - 1]) - ref) / ref)
    gram_ok = gram_worst <= 1e-9

    fixtures = all_presentations()
    prune_sample = fixtures[:4] + fixtures[4:54:5]
    prune_ok, depths = True, 0
    for L in prune_sample:
        good, compared = _pruned_vs_unpruned(L)
        prune_ok &= good
        depths += compared

    prop_fail = []
    for L in fixtures:
        pts = joint_point_spectrum(L.basis, L.tol)
        r_inf = float(max(la.vector_p_norm(f, "inf") for f in pts))
        for p in (1, 2, 4, 8):
            r_p = float(max(la.vector_p_norm(f, p) for f in pts))
            if not (r_inf <= r_p * (1 + 1e-12) and r_p <= L.n ** (1 / p) * r_inf * (1 + 1e-12)):
                prop_fail.append(p)

    fekete_fail, pairs = 0, 0
    for L in fixtures[:30]:
        for p in ("inf", 1, 2):
            norms = {m: float(tuple_power_norm(L.basis, m, p)) for m in range(1, 7)}
            for a, b in itertools.product(range(1, 4), repeat=2):
                pairs += 1
                if norms[a + b] > norms[a] * norms[b] * (1 + 1e-9) + 1e-300:
                    fekete_fail += 1
    ok = gram_ok and prune_ok and not prop_fail and fekete_fail == 0
    record(7, ok, f"Gram vs stack worst rel. error {gram_worst:.2e}; pruned==unpruned on "
                  f"{len(prune_sample)} fixtures / {depths} depths: {prune_ok}; "
                  f"r_inf <= r_p <= n^(1/p) r_inf failures {len(prop_fail)}; submultiplicativity {fekete_fail}/{pairs} failures")


def test_criterion_8_engel_vanishing():
    L = heisenberg_fixture().presentation
    norms = {p: tuple_power_norm(L.basis, 3, p) for p in ("1", "2", "inf")}
    check = verify_main_theorem(L, "inf", 10)
    check2 = verify_main_theorem(L, 2, 64)
    ok = (all(v == 0 for v in norms.values()) and check.passed and check.rho_upper == 0
          and check.r_p == 0 and check2.passed and check2.rho_upper == 0)
    record(8, ok, f"Heisenberg ||T^3||_p = {norms}; radius check p=inf rho={check.rho_upper!r}, "
                  f"r={check.r_p!r}; p=2 rho={check2.rho_upper!r}")
