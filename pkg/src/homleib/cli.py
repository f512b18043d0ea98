"""``homleib`` command-line interface.

Exit codes: 0 success (an obstructed extension or a non-rigid verdict is still
a success), 1 an axiom fails (algebra, group action, deformation equations or
equivariance of jets), 2 usage or malformed input.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import document
from .algebra import HomLeibnizAlgebra, ValidationReport, verify_hom_leibniz, verify_multiplicative
from .cochain import AlphaTypeCochain, GammaCochain
from .cohomology import DEFAULT_MAX_DEGREE, cheng_cai_cohomology, cohomology, compatible_subspace, is_coboundary, is_cocycle
from .deformation import (TruncatedDeformation, apply_gauge, extend_to, infinitesimal, obstruction,
                          reduce, rigidity_report, verify)
from .document import DocumentError, format_scalar, format_sparse
from .equivariant import (NonEquivariantError, check_equivariant_jets, equivariant_cohomology,
                          equivariant_extend_to, equivariant_obstruction, equivariant_reduce,
                          equivariant_rigidity_report, invariant_subspace, verify_action)

EXIT_OK, EXIT_AXIOM, EXIT_USAGE = 0, 1, 2
HARD_MAX_DEGREE = 4

DEFORM_COMMANDS = ("verify", "infinitesimal", "obstruct", "extend", "gauge", "reduce", "rigidity")


class UsageError(Exception):
    pass


class AxiomFailure(Exception):
    def __init__(self, report: dict, text: str):
        super().__init__(text)
        self.report = report
        self.text = text


# -- serialization helpers -------------------------------------------------------

def _vec(v) -> list:
    return [format_scalar(x) for x in v]


def _map(g: GammaCochain) -> dict:
    return {"arity": g.arity, "entries": format_sparse(g.coeffs)}


def _cochain(c: AlphaTypeCochain) -> dict:
    out = {"degree": c.degree, "gamma_part": _map(c.gamma_part)}
    if c.alpha_part is not None:
        out["alpha_part"] = _map(c.alpha_part)
    return out


def _validation(report: ValidationReport) -> dict:
    return {"passed": report.passed,
            "violations": [{"kind": v.kind, "where": list(v.where), "lhs": _vec(v.lhs), "rhs": _vec(v.rhs)}
                           for v in report.violations]}


def _validation_text(title: str, report: ValidationReport) -> list[str]:
    if report.passed:
        return [f"{title}: passed"]
    lines = [f"{title}: FAILED ({len(report.violations)} violation(s))"]
    for v in report.violations:
        lines.append(f"  {v.kind} at {tuple(v.where)}: lhs = {_vec(v.lhs)}, rhs = {_vec(v.rhs)}")
    return lines


def _map_text(symbol: str, g: GammaCochain) -> list[str]:
    entries = format_sparse(g.coeffs)
    if not entries:
        return [f"  {symbol} = 0"]
    lines = []
    for e in entries:
        *idx, num, den = e
        *args, k = idx
        coef = format_scalar(Fraction(num, den))
        lines.append(f"  {symbol}({', '.join(f'e{i}' for i in args)}) has e{k}-coefficient {coef}")
    return lines


# -- algebra-level checks -----------------------------------------------------------

def _check_algebra(doc: document.AlgebraDocument) -> None:
    L = doc.algebra
    hl, mu = verify_hom_leibniz(L), verify_multiplicative(L)
    if hl.passed and mu.passed:
        return
    report = {"command": "check", "hom_leibniz": _validation(hl), "multiplicative": _validation(mu)}
    text = "\n".join(["base algebra is not a multiplicative Hom-Leibniz algebra"]
                     + _validation_text("Hom-Leibniz identity", hl)
                     + _validation_text("multiplicativity", mu))
    raise AxiomFailure(report, text)


def _check_action(doc: document.AlgebraDocument) -> None:
    if doc.action is None:
        return
    rep = verify_action(doc.algebra, doc.action)
    if not rep.passed:
        raise AxiomFailure({"command": "check", "action": _validation(rep)},
                           "\n".join(_validation_text("group action", rep)))


def _check_jets(doc: document.AlgebraDocument, D: TruncatedDeformation) -> None:
    if doc.action is None:
        return
    try:
        check_equivariant_jets(D, doc.action)
    except NonEquivariantError as exc:
        raise AxiomFailure({"command": "check", "equivariant_jets": False,
                            "failing_jet": {"kind": exc.kind, "index": exc.index}}, str(exc)) from None


# -- commands ---------------------------------------------------------------------------

def cmd_verify(doc: document.AlgebraDocument) -> tuple[dict, str, int]:
    L = doc.algebra
    hl, mu = verify_hom_leibniz(L), verify_multiplicative(L)
    report = {"command": "verify", "name": doc.name, "dim": L.dim,
              "hom_leibniz": _validation(hl), "multiplicative": _validation(mu)}
    lines = [f"algebra {doc.name or '(unnamed)'} of dimension {L.dim}"]
    lines += _validation_text("Hom-Leibniz identity", hl)
    lines += _validation_text("multiplicativity", mu)
    ok = hl.passed and mu.passed
    if doc.action is not None:
        act = verify_action(L, doc.action)
        report["action"] = _validation(act)
        lines += _validation_text(f"action of a group of order {doc.action.group.order}", act)
        ok = ok and act.passed
    report["passed"] = ok
    return report, "\n".join(lines), EXIT_OK if ok else EXIT_AXIOM


def cmd_cohomology(doc: document.AlgebraDocument, max_degree: int, equivariant: bool,
                   cheng_cai: bool) -> tuple[dict, str, int]:
    if equivariant and doc.action is None:
        raise UsageError("--equivariant needs a \"group\" block in the document")
    if equivariant and cheng_cai:
        raise UsageError("--equivariant and --cheng-cai cannot be combined")
    _check_algebra(doc)
    if equivariant:
        _check_action(doc)
    L = doc.algebra
    if cheng_cai:
        kind, symbol = "cheng-cai", "H^n of alpha-compatible maps under ∂_γγ"
    elif equivariant:
        kind, symbol = "equivariant", "H̃Lⁿ_G(L,L)"
    else:
        kind, symbol = "alpha-type", "H̃Lⁿ(L,L)"
    rows = []
    for n in range(1, max_degree + 1):
        if cheng_cai:
            r = cheng_cai_cohomology(L, n, max_degree, strict=False)
            size = compatible_subspace(L, n).dim
        elif equivariant:
            r = equivariant_cohomology(L, doc.action, n, max_degree, strict=False)
            size = invariant_subspace(doc.action, n).dim
        else:
            r = cohomology(L, n, max_degree, strict=False)
            size = AlphaTypeCochain.space_dim(L.dim, n)
        rows.append({"degree": n, "dim_cochains": size, "dim_cocycles": r.dim_cocycles,
                     "dim_coboundaries": r.dim_coboundaries, "betti": r.betti,
                     "is_complex": r.is_complex})
    report = {"command": "cohomology", "complex": kind, "name": doc.name, "max_degree": max_degree,
              "rows": rows}
    header = ["degree", "dim cochains", "dim cocycles", "dim coboundaries", "betti"]
    widths = [len(h) for h in header]
    lines = [f"{symbol} for {doc.name or '(unnamed)'}", " | ".join(header)]
    for row in rows:
        cells = [row["degree"], row["dim_cochains"], row["dim_cocycles"], row["dim_coboundaries"], row["betti"]]
        line = " | ".join(str(c).rjust(w) for c, w in zip(cells, widths))
        if not row["is_complex"]:
            line += "  (not a complex here: coboundaries = image ∩ cocycles)"
        lines.append(line)
    return report, "\n".join(lines), EXIT_OK


def _need_deformation(doc: document.AlgebraDocument) -> TruncatedDeformation:
    if doc.deformation is None:
        raise UsageError("this subcommand needs a \"deformation\" block in the document")
    return doc.deformation


def cmd_deform(doc: document.AlgebraDocument, sub: str, to: Optional[int]) -> tuple[dict, str, int]:
    L = doc.algebra
    _check_algebra(doc)
    _check_action(doc)
    eq = doc.action is not None
    report: dict = {"command": f"deform {sub}", "name": doc.name, "equivariant": eq}
    lines: list[str] = []
    code = EXIT_OK

    if sub == "rigidity":
        r = equivariant_rigidity_report(L, doc.action) if eq else rigidity_report(L)
        report.update({"betti2": r.betti2, "betti3": r.betti3, "verdict": r.verdict,
                       "is_complex": r.complex_ok})
        prefix = "equivariantly " if eq and r.rigid else ""
        lines.append(f"betti2 = {r.betti2}, betti3 = {r.betti3}: {prefix}{r.verdict}")
        if not r.complex_ok:
            lines.append("warning: the differentials do not compose to zero around degree 3")
        return report, "\n".join(lines), code

    if sub == "gauge":
        if doc.gauge is None:
            raise UsageError("deform gauge needs a \"gauge\" block in the document")
        D = doc.deformation or TruncatedDeformation.trivial(L, doc.gauge.order)
        _check_jets(doc, D)
        if doc.gauge.order != D.order:
            raise UsageError(f"gauge order {doc.gauge.order} does not match deformation order {D.order}")
        out = apply_gauge(D, doc.gauge)
        rep = verify(out)
        report.update({"deformation": document.deformation_to_dict(out), "verified": rep.passed})
        lines.append(f"transformed deformation of order {out.order} (verifies: {rep.passed})")
        lines += _jets_text(out)
        return report, "\n".join(lines), code

    D = _need_deformation(doc)
    _check_jets(doc, D)

    if sub == "verify":
        rep = verify(D)
        report.update({"order": D.order, **_validation(rep)})
        lines += _validation_text(f"deformation equations through order {D.order}", rep)
        return report, "\n".join(lines), EXIT_OK if rep.passed else EXIT_AXIOM

    if sub == "infinitesimal":
        inf = infinitesimal(D)
        if inf is None:
            report.update({"trivial": True})
            lines.append(f"all jets of order 1..{D.order} vanish (trivial jet)")
            return report, "\n".join(lines), code
        n, c = inf
        cocycle = is_cocycle(L, c)
        witness = is_coboundary(L, c)
        report.update({"trivial": False, "index": n, "infinitesimal": _cochain(c),
                       "is_cocycle": cocycle, "is_coboundary": witness is not None})
        lines.append(f"{n}-infinitesimal (m_{n}, α_{n}); cocycle: {cocycle}; coboundary: {witness is not None}")
        lines += _map_text(f"m_{n}", c.gamma_part) + _map_text(f"α_{n}", c.alpha_part)
        return report, "\n".join(lines), code

    if sub == "obstruct":
        obs = equivariant_obstruction(D, doc.action) if eq else obstruction(D)
        c = obs.cochain()
        witness = is_coboundary(L, c)
        report.update({"order": obs.order, "obstruction": _cochain(c), "is_zero": obs.is_zero(),
                       "is_cocycle": is_cocycle(L, c), "class_vanishes": witness is not None})
        lines.append(f"Obs^{obs.order}: zero: {obs.is_zero()}; cocycle: {is_cocycle(L, c)}; "
                     f"class vanishes: {witness is not None}")
        lines += _map_text(f"Obs^{obs.order}_γ", c.gamma_part) + _map_text(f"Obs^{obs.order}_α", c.alpha_part)
        return report, "\n".join(lines), code

    if sub == "extend":
        target = D.order + 1 if to is None else to
        if target < D.order:
            raise UsageError(f"--to {target} is below the deformation order {D.order}")
        res = equivariant_extend_to(D, doc.action, target) if eq else extend_to(D, target)
        report["target"] = target
        if res.obstructed:
            c = res.obstruction.cochain()
            report.update({"obstructed": True, "stopped_at": res.obstruction.order,
                           "obstruction": _cochain(c)})
            lines.append(f"obstructed: Obs^{res.obstruction.order} is not a coboundary")
            lines += _map_text(f"Obs^{res.obstruction.order}_γ", c.gamma_part)
            lines += _map_text(f"Obs^{res.obstruction.order}_α", c.alpha_part)
        else:
            out = res.deformation
            report.update({"obstructed": False, "deformation": document.deformation_to_dict(out)})
            lines.append(f"extended to order {out.order}")
            lines += _jets_text(out)
        return report, "\n".join(lines), code

    if sub == "reduce":
        out = equivariant_reduce(D, doc.action) if eq else reduce(D)
        inf = infinitesimal(out)
        report.update({"trivial": inf is None, "deformation": document.deformation_to_dict(out)})
        if inf is None:
            lines.append(f"equivalent to the trivial deformation up to order {out.order}")
        else:
            lines.append(f"reduced: the {inf[0]}-infinitesimal is not a coboundary")
        lines += _jets_text(out)
        return report, "\n".join(lines), code

    raise UsageError(f"unknown deform subcommand {sub!r}")


def _jets_text(D: TruncatedDeformation) -> list[str]:
    lines = []
    for n in range(1, D.order + 1):
        lines += _map_text(f"m_{n}", D.m_jets[n]) + _map_text(f"α_{n}", D.a_jets[n])
    return lines


# -- driver ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="report format (default: text)")
    common.add_argument("--output", metavar="PATH", help="write the report to PATH instead of stdout")

    parser = argparse.ArgumentParser(prog="homleib",
                                     description="Cohomology and deformations of Hom-Leibniz algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check the algebra (and group action) axioms")
    p.add_argument("file")

    p = sub.add_parser("cohomology", parents=[common], help="cohomology dimensions by degree")
    p.add_argument("file")
    p.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE, metavar="K")
    p.add_argument("--allow-large-degree", action="store_true",
                   help=f"permit --max-degree above {HARD_MAX_DEGREE}")
    p.add_argument("--equivariant", action="store_true", help="restrict to invariant cochains")
    p.add_argument("--cheng-cai", action="store_true",
                   help="use alpha-compatible maps with the differential ∂_γγ")

    p = sub.add_parser("deform", parents=[common], help="deformation theory")
    p.add_argument("subcommand", choices=DEFORM_COMMANDS)
    p.add_argument("file")
    p.add_argument("--to", type=int, metavar="K", help="target order for extend")
    return parser


def _emit(report: dict, text: str, fmt: str, output: Optional[str]) -> None:
    body = document.dumps(report) + "\n" if fmt == "json" else text + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        doc = document.load(args.file)
        if args.command == "verify":
            report, text, code = cmd_verify(doc)
        elif args.command == "cohomology":
            if args.max_degree < 1:
                raise UsageError("--max-degree must be at least 1")
            if args.max_degree > HARD_MAX_DEGREE and not args.allow_large_degree:
                raise UsageError(f"--max-degree above {HARD_MAX_DEGREE} needs --allow-large-degree")
            report, text, code = cmd_cohomology(doc, args.max_degree, args.equivariant, args.cheng_cai)
            if any(not r["is_complex"] for r in report["rows"]):
                print("warning: consecutive differentials do not compose to zero for this algebra; "
                      "affected rows are marked", file=sys.stderr)
        else:
            report, text, code = cmd_deform(doc, args.subcommand, args.to)
    except (DocumentError, UsageError) as exc:
        print(f"homleib: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"homleib: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AxiomFailure as exc:
        _emit(exc.report, exc.text, args.format, args.output)
        return EXIT_AXIOM
    _emit(report, text, args.format, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
