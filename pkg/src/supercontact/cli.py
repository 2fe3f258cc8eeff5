"""Command-line front end: parse a ``.gcm`` file, run one check, report.

Exit codes: 0 success/pass, 1 mathematical failure, 2 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from typing import Callable, Dict, List, Optional, Tuple

from .algebra import SuperPolynomial, format_polynomial
from .errors import ParseError, SuperAlgebraError
from .textio import StructureFile, format_structure, parse_polynomial, parse_structure

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """A required block or flag is missing."""


class Report:
    def __init__(self, command: str):
        self.command = command
        self.lines: List[str] = []
        self.passed = True
        self.residuals: Dict[str, str] = {}
        self.result: Dict[str, object] = {}

    def say(self, line: str):
        self.lines.append(line)

    def residual(self, name: str, poly: SuperPolynomial):
        text = format_polynomial(poly)
        self.residuals[name] = text
        self.say(f"residual {name}: {text}")


def _need(sf: StructureFile, block: str):
    value = getattr(sf, block)
    if value is None:
        raise InputError(f"input has no '{block}' block")
    return value


def _operand(text: Optional[str], default, chart, label: str):
    if text is not None:
        try:
            return parse_polynomial(text, chart)
        except ParseError as exc:
            raise InputError(f"--{label}: {exc}") from None
    if default is None:
        raise InputError(f"operand {label} missing (give --{label} or put it in the file)")
    return default


def cmd_check_contact(sf: StructureFile, args, rep: Report):
    from .contact import check_contact, invert_two_form, symplectize

    alpha = _need(sf, "oneform")
    inv = invert_two_form(symplectize(alpha))
    rep.passed = inv.nondegenerate
    rep.result["contact"] = inv.nondegenerate
    rep.result["reason"] = inv.reason
    rep.say(f"one-form: {alpha}")
    rep.say(f"CONTACT: {'yes' if inv.nondegenerate else 'no'}")
    rep.say(f"reason: {inv.reason}")
    if inv.nondegenerate:
        rep.result["poisson_tensor"] = format_polynomial(inv.hamiltonian)
        rep.say(f"Poisson tensor J = {inv.hamiltonian}")


def cmd_check_jacobi(sf: StructureFile, args, rep: Report):
    from .jacobi import check_jacobi, poissonization_is_homological

    j = _need(sf, "jacobi")
    r = check_jacobi(j)
    hom = poissonization_is_homological(j)
    for name, v in r.residuals.items():
        rep.residual(name, v)
    rep.passed = r.passed
    rep.result["poissonization_homological"] = hom
    rep.say(f"poissonization homological: {'yes' if hom else 'no'}")
    rep.say(f"JACOBI: {'pass' if r.passed else 'fail'}")
    if hom != r.passed:
        raise SuperAlgebraError("Jacobi residuals and poissonization disagree")


def cmd_poissonize(sf: StructureFile, args, rep: Report):
    from .jacobi import poissonization_is_homological, poissonize

    j = _need(sf, "jacobi")
    J = poissonize(j)
    hom = poissonization_is_homological(j)
    rep.result["J"] = format_polynomial(J)
    rep.result["homological"] = hom
    rep.say(f"J = {J}")
    rep.say(f"HOMOLOGICAL: {'yes' if hom else 'no'}")
    rep.passed = hom


def cmd_bracket(sf: StructureFile, args, rep: Report):
    from .brackets import BracketCarrier, canonical_bracket, derived_bracket

    h = _need(sf, "hamiltonian")
    chart = h.chart
    F = _operand(args.F, h.F, chart, "F")
    G = _operand(args.G, h.G, chart, "G")
    b = BracketCarrier.darboux(chart)
    if args.mode == "canonical":
        v = canonical_bracket(b, F, G)
    else:
        v = derived_bracket(b, h.H, F, G)
    rep.result["value"] = format_polynomial(v)
    rep.result["mode"] = args.mode
    rep.say(f"{args.mode} bracket {{{F}, {G}}} = {v}")


def cmd_legendre(sf: StructureFile, args, rep: Report):
    from .contact import check_contact, legendre_bracket

    alpha = _need(sf, "oneform")
    if not check_contact(alpha):
        rep.passed = False
        rep.say("CONTACT: no")
        return
    F = _operand(args.F, None, alpha.chart, "F")
    G = _operand(args.G, None, alpha.chart, "G")
    v = legendre_bracket(alpha, F, G)
    rep.result["value"] = format_polynomial(v)
    rep.say(f"Legendre bracket {{{F}, {G}}} = {v}")


def cmd_cohomology(sf: StructureFile, args, rep: Report):
    from .cohomology import (check_complex, cohomology_table, kirillov_complex, twisted_matrix_matches,
                             twisted_square_vanishes)

    chart = sf.chart
    if any(g.parity for g in chart.generators):
        raise InputError("cohomology needs a purely even base chart")
    m = len(chart.generators)
    c = kirillov_complex(m, args.truncate)
    ok_complex = check_complex(c)
    match, mismatches = twisted_matrix_matches(m, min(args.truncate, 2))
    square = twisted_square_vanishes(m, seed=args.seed)
    rep.say(f"base dimension {m}, truncation {args.truncate}, seed {args.seed}")
    rep.say("degree  dim  rank  H")
    rows = []
    for r in cohomology_table(c):
        rep.say(f"{r.degree:>6} {r.dim:>4} {r.rank:>5} {r.cohomology:>3}")
        rows.append({"degree": r.degree, "dim": r.dim, "rank": r.rank, "cohomology": r.cohomology})
    rep.result["table"] = rows
    rep.result["d_squared_zero"] = ok_complex
    rep.result["twisted_operator_matches"] = match
    rep.result["twisted_square_zero"] = square
    rep.say(f"d^2 = 0: {'yes' if ok_complex else 'no'}")
    rep.say(f"twisted de Rham operator matches: {'yes' if match else 'no'}")
    for line in mismatches[:5]:
        rep.say(f"  mismatch {line}")
    rep.say(f"twisted operator squares to 0: {'yes' if square else 'no'}")
    rep.passed = ok_complex and match and square


def cmd_check_courant(sf: StructureFile, args, rep: Report):
    from .courant import check_master_equation, courant_data, roundtrip_matches

    spec = _need(sf, "courant")
    me = check_master_equation(spec)
    rep.residual("{H,H}", me.residual)
    rep.say(f"MASTER EQUATION: {'pass' if me.passed else 'fail'}")
    rt = roundtrip_matches(spec)
    rep.result["roundtrip"] = rt
    rep.say(f"roundtrip (g, r, A): {'yes' if rt else 'no'}")
    rep.passed = me.passed and rt
    if not me.passed:
        return
    data = courant_data(spec)
    for name, res in data.residuals.items():
        text = "0" if not res else format_polynomial(res[0])
        rep.residuals[f"axiom {name}"] = text
        rep.say(f"axiom {name}: {'0' if not res else f'{len(res)} nonzero, first {text}'}")
    rep.passed = rep.passed and data.passed


def cmd_wade(sf: StructureFile, args, rep: Report):
    from .courant import WadeSection, wade_bracket, wade_model, wade_pairing

    u_raw, v_raw = _need(sf, "wade")
    base = sf.chart
    u = WadeSection(base, u_raw.X, u_raw.f, u_raw.alpha, u_raw.g)
    v = WadeSection(base, v_raw.X, v_raw.f, v_raw.alpha, v_raw.g)
    w = wade_bracket(u, v)
    d = wade_model(base).bracket(u, v)
    rep.say(f"u = {u}")
    rep.say(f"v = {v}")
    rep.say(f"{{u, v}} = {w}")
    rep.say(f"<u, v> = {wade_pairing(u, v)}")
    rep.result["bracket"] = str(w)
    rep.result["derived_bracket"] = str(d)
    rep.passed = w == d
    rep.say(f"derived bracket agrees: {'yes' if rep.passed else 'no'}")


COMMANDS: Dict[str, Callable] = {
    "check-contact": cmd_check_contact,
    "check-jacobi": cmd_check_jacobi,
    "poissonize": cmd_poissonize,
    "bracket": cmd_bracket,
    "legendre": cmd_legendre,
    "cohomology": cmd_cohomology,
    "check-courant": cmd_check_courant,
    "wade": cmd_wade,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="supercontact", description="Verify super contact / Jacobi / Courant structures.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("file", help="structure file (.gcm)")
        s.add_argument("--json", metavar="PATH", help="write a machine-readable report")
        s.add_argument("--timing", action="store_true", help="include wall-clock time in the JSON report")
        if name in ("bracket", "legendre"):
            s.add_argument("--F", help="first operand polynomial")
            s.add_argument("--G", help="second operand polynomial")
        if name == "bracket":
            s.add_argument("--mode", choices=("canonical", "derived"), default="derived")
        if name == "cohomology":
            s.add_argument("--truncate", type=int, default=3)
            s.add_argument("--seed", type=int, default=0)
    return p


def _digest(text: str, args) -> str:
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in ("file", "json", "timing")}
    h = hashlib.sha256()
    h.update(text.encode("utf-8"))
    h.update(json.dumps(flags, sort_keys=True).encode("utf-8"))
    return h.hexdigest()


def run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    start = time.perf_counter()
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc.strerror}", file=err)
        return EXIT_INPUT
    rep = Report(args.command)
    try:
        sf = parse_structure(text)
        COMMANDS[args.command](sf, args, rep)
    except ParseError as exc:
        print(f"{args.file}:{exc}", file=err)
        return EXIT_INPUT
    except InputError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except SuperAlgebraError as exc:
        print(f"error [{exc.code}]: {exc}", file=err)
        return EXIT_INPUT
    for line in rep.lines:
        print(line, file=out)
    code = EXIT_OK if rep.passed else EXIT_FAIL
    if args.json:
        report = {
            "schema": SCHEMA,
            "command": args.command,
            "inputs_digest": _digest(text, args),
            "passed": rep.passed,
            "exit_code": code,
            "residuals": rep.residuals,
            "result": rep.result,
            "timing": round(time.perf_counter() - start, 6) if args.timing else None,
        }
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
