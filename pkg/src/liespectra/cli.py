"""Command-line entry point: ``liespectra analyze|spectrum|radius|verify|examples``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import documents as docs
from . import linalg as la
from .documents import DocumentError, format_character, format_value
from .generators import (
    SOLVABLE_IDS,
    UnknownFixtureError,
    heisenberg_fixture,
    random_commuting_tuple,
    random_nilpotent_algebra,
    solvable_example,
)
from .koszul import spectrum
from .lie import (
    NEITHER,
    NILPOTENT,
    SOLVABLE,
    LieError,
    jordan_holder_basis,
    lower_central_series,
    verify_subalgebra,
)
from .radius import (
    DEFAULT_BUDGET,
    EmptyPointSpectrumError,
    NotApplicableError,
    algebraic_radius_estimate,
    spectrum_max_radius,
    verify_main_theorem,
)
from .weights import canonical_characters, joint_point_spectrum, weight_decomposition

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_NOT_APPLICABLE = 3
EXIT_BUDGET = 4


class CliError(Exception):
    def __init__(self, message, code=EXIT_INPUT):
        super().__init__(message)
        self.code = code


# loading ---------------------------------------------------------------------------

def _load(path):
    """Parse a document and return (input presentation, JH presentation, names)."""
    doc = docs.load_document(path)
    names, mats = doc.ordered()
    L = verify_subalgebra(mats)
    jh = jordan_holder_basis(L) if L.kind != NEITHER else None
    return L, jh, names


def _combination_name(coords, names) -> str:
    terms = []
    for c, nm in zip(coords, names):
        if not c:
            continue
        if c == 1:
            terms.append(f"+{nm}")
        elif c == -1:
            terms.append(f"-{nm}")
        else:
            s = docs.format_scalar(c)
            terms.append(f"+({s})*{nm}" if ("+" in s[1:] or "-" in s[1:]) else
                         (f"{s}*{nm}" if s.startswith("-") else f"+{s}*{nm}"))
    text = "".join(terms) or "0"
    return text[1:] if text.startswith("+") else text


def jh_names(L, jh, names) -> list[str]:
    """The JH basis written in terms of the input generators."""
    return [_combination_name(L.coordinates(x), names) for x in jh.basis]


def _class_label(L) -> str:
    if L.kind == NILPOTENT:
        lcs = lower_central_series(L)
        steps = next((i for i, term in enumerate(lcs) if not term), len(lcs))
        return f"nilpotent, class {steps}"
    if L.kind == SOLVABLE:
        return "solvable non-nilpotent"
    return "not solvable"


def _emit(args, report: dict, lines: list[str]):
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print("\n".join(lines))


def _chars(points) -> list:
    return [docs.encode_character(f) for f in points]


def _same(a, b, tol) -> bool:
    return len(a) == len(b) and all(
        all(la.scalars_close(x, y, tol) for x, y in zip(f, g)) for f, g in zip(a, b))


# commands -------------------------------------------------------------------------

def cmd_analyze(args) -> int:
    L, jh, names = _load(args.file)
    label = _class_label(L)
    report = {"class": label, "kind": L.kind, "dimension": L.n, "space_dimension": L.d,
              "generators": names}
    lines = [f"algebra: {label}", f"dim L = {L.n}, acting on C^{L.d}"]
    n = L.n
    consts = []
    for a in range(n):
        for b in range(a + 1, n):
            for h in range(n):
                c = L.structure[a, b, h]
                if c:
                    consts.append({"i": names[a], "j": names[b], "k": names[h],
                                   "value": docs.encode_scalar(c)})
    report["structure_constants"] = consts
    lines.append("brackets [A,B] = BA - AB:")
    if not consts:
        lines.append("  all zero (abelian)")
    for a in range(n):
        for b in range(a + 1, n):
            coords = L.structure[a, b]
            if any(coords):
                lines.append(f"  [{names[a]},{names[b]}] = {_combination_name(coords, names)}")
    if jh is None:
        report["jh_order"] = None
        report["derived_index"] = None
        lines.append("no Jordan-Hölder basis: the algebra is not solvable")
    else:
        order = jh_names(L, jh, names)
        report["jh_order"] = order
        report["derived_index"] = jh.derived_index
        lines.append(f"JH order ({','.join(order)})")
        lines.append(f"derived algebra spanned by the first {jh.derived_index} JH elements")
        lines.append(f"input order is JH: {'yes' if L.jh_ordered else 'no'}")
    _emit(args, report, lines)
    return EXIT_OK


def _require_solvable(L):
    if L.kind == NEITHER:
        raise CliError("spectra are only computed for solvable algebras", EXIT_NOT_APPLICABLE)


def cmd_spectrum(args) -> int:
    L, jh, names = _load(args.file)
    _require_solvable(L)
    order = jh_names(L, jh, names)
    sigma = joint_point_spectrum(jh.basis, jh.tol)
    report = {"class": _class_label(L), "jh_order": order, "sigma_pt": _chars(sigma),
              "method": args.method, "verdicts": {}}
    lines = [f"algebra: {_class_label(L)}, JH order ({','.join(order)})"]
    code = EXIT_OK
    sp = weights = None
    if args.method in ("homology", "both"):
        res = spectrum(jh)
        sp = res.points
        report["spectrum"] = _chars(sp)
        report["homology"] = {format_character(f): dims for f, dims in res.homology.items()}
        report["complete"] = res.complete
        lines.append("Sp (homology) = {" + ", ".join(format_character(f) for f in sp) + "}")
        for f in sp:
            lines.append(f"  H_* at {format_character(f)}: {res.homology[f]}")
        if not res.complete:
            lines.append("  (candidate set not proven complete)")
    if args.method in ("weights", "both"):
        if jh.kind != NILPOTENT:
            if args.method == "weights":
                print("weights method needs a nilpotent algebra", file=sys.stderr)
                return EXIT_NOT_APPLICABLE
            lines.append("weights: not applicable (algebra is not nilpotent)")
        else:
            weights = canonical_characters([s.weight for s in weight_decomposition(jh)], jh.tol)
            report["weights"] = _chars(weights)
            if sp is None:
                report["spectrum"] = _chars(weights)
            lines.append("weights = {" + ", ".join(format_character(f) for f in weights) + "}")
    lines.append("sigma_pt = {" + ", ".join(format_character(f) for f in sigma) + "}")
    if args.method == "both":
        agree = _same(sp, sigma, jh.tol) and (weights is None or _same(sp, weights, jh.tol))
        report["verdicts"]["agreement"] = "agree" if agree else "differ"
        lines.append(f"verdict: {'agree' if agree else 'differ'}")
        if jh.kind == NILPOTENT and not agree:
            code = EXIT_VIOLATION
    _emit(args, report, lines)
    return code


def _default_depth(p: float) -> int:
    return 4096 if p == 2 else 40


def _radius_block(report, max_sp) -> dict:
    return {
        "p": docs.encode_value(report.p),
        "per_m": [{"m": m, "norm": docs.encode_value(v), "root": docs.encode_value(r)}
                  for (m, v), (_, r) in zip(report.norms, report.roots)],
        "rho_upper": docs.encode_value(report.rho_upper),
        "argmin_m": report.argmin_m,
        "r_p": docs.encode_value(report.r_p),
        "max_sp": docs.encode_value(max_sp),
        "converged": report.converged,
        "budget_exceeded": report.budget_exceeded,
    }


def _radius_lines(report, max_sp, every: int | None = None) -> list[str]:
    lines = [f"{'m':>6}  {'||T^m||_p':>22}  {'||T^m||_p^(1/m)':>22}"]
    rows = list(zip(report.norms, report.roots))
    if every is None:
        every = 1 if len(rows) <= 64 else max(1, len(rows) // 32)
    for idx, ((m, v), (_, r)) in enumerate(rows):
        if idx % every == 0 or idx == len(rows) - 1 or m == report.argmin_m:
            lines.append(f"{m:>6}  {format_value(v):>22}  {format_value(r):>22}")
    lines.append(f"rho_upper = {format_value(report.rho_upper)} (at m = {report.argmin_m})")
    lines.append(f"r_p       = {format_value(report.r_p)}")
    lines.append(f"max |Sp|  = {format_value(max_sp)}")
    return lines


def _comparison(r, rho, sp_max) -> str:
    def rel(a, b):
        if a is None or b is None:
            return "?"
        fa, fb = float(a), float(b)
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            return "=" if a == b else "≠"
        return "≈" if abs(fa - fb) <= 0.05 * max(abs(fa), abs(fb), 1e-12) else "≠"
    return f"{format_value(r)} {rel(r, rho)} {format_value(rho)} {rel(rho, sp_max)} {format_value(sp_max)}"


def cmd_radius(args) -> int:
    L, jh, names = _load(args.file)
    _require_solvable(L)
    p = la.parse_p(args.p)
    M = args.M or _default_depth(p)
    try:
        report = algebraic_radius_estimate(jh.basis, p, M, budget=args.budget, tol=jh.tol)
    except EmptyPointSpectrumError as exc:
        raise CliError(str(exc), EXIT_VIOLATION) from None
    max_sp = spectrum_max_radius(jh, p)
    block = _radius_block(report, max_sp)
    comparison = _comparison(report.r_p, report.rho_upper, max_sp)
    out = {"class": _class_label(L), "jh_order": jh_names(L, jh, names), "radii": block,
           "verdicts": {"comparison": comparison}}
    lines = [f"algebra: {_class_label(L)}, p = {format_value(p) if not math.isinf(p) else 'inf'}, M = {M}"]
    lines += _radius_lines(report, max_sp)
    lines.append(f"r_p vs rho_upper vs max|Sp|: {comparison}")
    if report.budget_exceeded:
        lines.append(f"budget exceeded after m = {report.norms[-1][0] if report.norms else 0}; report is partial")
    _emit(args, out, lines)
    return EXIT_BUDGET if report.budget_exceeded else EXIT_OK


def cmd_verify(args) -> int:
    L, jh, names = _load(args.file)
    _require_solvable(L)
    p = la.parse_p(args.p)
    M = args.M or _default_depth(p)
    try:
        check = verify_main_theorem(jh, p, M, tol=args.tol, budget=args.budget)
    except NotApplicableError:
        report = algebraic_radius_estimate(jh.basis, p, M, budget=args.budget, tol=jh.tol)
        max_sp = spectrum_max_radius(jh, p)
        comparison = _comparison(report.r_p, report.rho_upper, max_sp)
        out = {"class": _class_label(L), "radii": _radius_block(report, max_sp),
               "verdicts": {"theorem": "not-applicable", "comparison": comparison}}
        _emit(args, out, [f"theorem-not-applicable: {_class_label(L)}",
                          f"r_p, rho_upper, max|Sp|: {comparison}"])
        return EXIT_NOT_APPLICABLE
    rep = check.report
    if rep.budget_exceeded:
        verdict = "budget-exceeded"
        code = EXIT_BUDGET
    else:
        verdict = "pass" if check.passed else "fail"
        code = EXIT_OK if check.passed else EXIT_VIOLATION
    block = _radius_block(rep, None)
    out = {"class": _class_label(L), "radii": block,
           "verdicts": {"theorem": verdict, "gap": docs.encode_value(check.gap),
                        "lower_bound_ok": check.lower_bound_ok, "tol": args.tol}}
    lines = [f"algebra: {_class_label(L)}, p = {args.p}, M = {M}, tol = {args.tol}",
             f"r_p = {format_value(check.r_p)}, rho_upper = {format_value(check.rho_upper)}"
             f" (m = {rep.argmin_m}), gap = {format_value(check.gap)}",
             f"verdict: {verdict}"]
    _emit(args, out, lines)
    return code


def _example_fixture(args):
    if args.random_nilpotent:
        d, n, seed = args.random_nilpotent
        return random_nilpotent_algebra(d, n, seed)
    if args.commuting:
        from .generators import Fixture

        d, n, seed = args.commuting
        planted = random_commuting_tuple(d, n, seed)
        L = verify_subalgebra(planted.matrices)
        names = tuple(f"x{i + 1}" for i in range(n))
        return Fixture(f"commuting-d{d}-n{n}-s{seed}", L, names,
                       {"sigma_pt": planted.points, "sp": planted.points, "weights": planted.points})
    if args.id is None:
        raise CliError("give --id, --random-nilpotent or --commuting")
    if args.id.lower() == "heisenberg":
        return heisenberg_fixture()
    try:
        return solvable_example(args.id.upper())
    except UnknownFixtureError as exc:
        raise CliError(str(exc.args[0])) from None


def cmd_examples(args) -> int:
    doc = docs.fixture_document(_example_fixture(args))
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# parser -----------------------------------------------------------------------------

def _p_arg(text):
    try:
        la.parse_p(text)
    except (ValueError, la.InvalidParameterError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="liespectra",
                                     description="Spectra and spectral radii of matrix Lie algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(name, help_text, needs_file=True):
        sp = sub.add_parser(name, help=help_text)
        if needs_file:
            sp.add_argument("file", help="algebra document (JSON)")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    a = common("analyze", "class, brackets and Jordan-Hölder order")
    a.set_defaults(func=cmd_analyze)

    s = common("spectrum", "joint spectrum and joint point spectrum")
    s.add_argument("--method", choices=("homology", "weights", "both"), default="both")
    s.set_defaults(func=cmd_spectrum)

    for name, func, text in (("radius", cmd_radius, "algebraic and geometric spectral radii"),
                             ("verify", cmd_verify, "check rho_p = r_p for a nilpotent algebra")):
        r = common(name, text)
        r.add_argument("-p", type=_p_arg, default="inf", help="1, 2, inf or a float >= 1")
        r.add_argument("-M", type=int, default=None, help="max depth (default 40, or 4096 for p=2)")
        r.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max stored products per depth")
        if name == "verify":
            r.add_argument("--tol", type=float, default=0.05, help="relative tolerance on rho - r")
        r.set_defaults(func=func)

    e = common("examples", "write a fixture document with expected values", needs_file=False)
    e.add_argument("--id", help=f"one of {', '.join(SOLVABLE_IDS)}, heisenberg")
    e.add_argument("--random-nilpotent", nargs=3, type=int, metavar=("D", "N", "SEED"))
    e.add_argument("--commuting", nargs=3, type=int, metavar=("D", "N", "SEED"))
    e.add_argument("-o", "--output", help="write to this file instead of stdout")
    e.set_defaults(func=cmd_examples)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (DocumentError, LieError, la.InvalidParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_APPLICABLE if isinstance(exc, NotApplicableError) else EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
