"""Acceptance criteria, each at its exact (zero) tolerance and runtime limit.

Every test records one PASS/FAIL line (printed in the terminal summary) and
then asserts both the mathematical outcome and the runtime bound.
"""

import itertools
import json
import os
import random
import time
from fractions import Fraction
from io import StringIO

import pytest

import acceptance_log
from supercontact import cli
from supercontact.brackets import is_homological
from supercontact.cohomology import (check_complex, cohomology_dims, kirillov_complex, twisted_matrix_matches)
from supercontact.contact import (check_contact, contact_structure, explicit_legendre_even, explicit_legendre_odd,
                                  invert_two_form, legendre_bracket, symplectize, tensor_to_form)
from supercontact.courant import (CourantSpec, WadeSection, base_chart, check_master_equation, courant_data,
                                  courant_model, invert_symplectic_form, roundtrip_matches, symplectic_form_matrix,
                                  wade_bracket, wade_model, wade_pairing)
from supercontact.fixtures import (even_normal_form, even_normal_names, example_contact_form,
                                   example_non_contact_form, odd_normal_form, odd_normal_names)
from supercontact.jacobi import JacobiTriple, check_bracket_axioms, check_jacobi, poissonize
from supercontact.charts import make_chart
from supercontact.sampling import monomials_up_to, random_polynomial

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")


def run_criterion(number, title, limit, body):
    """Time ``body`` (returning ``(passed, detail)``), record the line, assert."""
    start = time.perf_counter()
    passed, detail = body()
    elapsed = time.perf_counter() - start
    ok = passed and elapsed < limit
    if passed:
        detail = "" if ok else "runtime limit exceeded"
    acceptance_log.record(number, title, ok, elapsed, limit, detail)
    assert passed, detail
    assert elapsed < limit, f"runtime {elapsed:.2f}s exceeds {limit}s"


# bracket tables -----------------------------------------------------------


def _table(cs):
    ext = cs.extended_chart
    return {(a, b): cs.poisson(ext.gen(a), ext.gen(b)) for a in ext.names for b in ext.names}


def _close_under_antisymmetry(ext, k, listed):
    """Extend listed brackets by {b,a} = -(-1)^{(|a|+k)(|b|+k)} {a,b}."""
    full = dict(listed)
    for (a, b), v in listed.items():
        s = -1 if ((ext[a].parity + k) * (ext[b].parity + k)) % 2 == 0 else 1
        full.setdefault((b, a), v.scale(s))
    return full


def _compare_tables(got, expected, ext):
    bad = []
    for key, v in got.items():
        want = expected.get(key, ext.zero())
        if v != want:
            bad.append(f"{{{key[0]},{key[1]}}} = {v}, expected {want}")
    return bad


def test_criterion_01_even_bracket_table():
    def body():
        eps = (1, -1)
        cs = contact_structure(even_normal_form(1, eps))
        ext = cs.extended_chart
        t_inv = ext.gen("t", -1)
        listed = {("z", "t"): ext.const(1),
                  ("p1", "z"): ext.gen("p1") * t_inv,
                  ("p1", "x1"): t_inv}
        for j, e in enumerate(eps, start=1):
            listed[(f"th{j}", "z")] = ext.gen(f"th{j}") * t_inv
            listed[(f"th{j}", f"th{j}")] = t_inv.scale(e)
        bad = _compare_tables(_table(cs), _close_under_antisymmetry(ext, 0, listed), ext)
        return not bad, "; ".join(bad[:3]) + (f" (+{len(bad) - 3} more)" if len(bad) > 3 else "")

    run_criterion(1, "even normal-form bracket table", 1.0, body)


def test_criterion_02_odd_bracket_table():
    def body():
        cs = contact_structure(odd_normal_form(2))
        ext = cs.extended_chart
        t_inv = ext.gen("t", -1)
        listed = {("t", "xi"): ext.const(1)}
        for a in (1, 2):
            listed[(f"th{a}", "xi")] = -(ext.gen(f"th{a}") * t_inv)
            listed[(f"x{a}", f"th{a}")] = -t_inv
        bad = _compare_tables(_table(cs), _close_under_antisymmetry(ext, 1, listed), ext)
        return not bad, "; ".join(bad[:3])

    run_criterion(2, "odd normal-form bracket table", 1.0, body)


# contact checks -----------------------------------------------------------


def _contact_cases():
    yield "superline dx + th dth", example_contact_form(), True
    yield "(1 + th) dx + th dth", example_non_contact_form(), False
    for n in (0, 1, 2):
        for eps in ((), (1,), (-1,), (1, -1), (1, 1), (-1, -1)):
            yield f"even normal form, {n} pairs, eps={eps}", even_normal_form(n, eps), True
    for n in (0, 1, 2):
        yield f"odd normal form, {n} pairs", odd_normal_form(n), True


@pytest.mark.parametrize("label,alpha,expected", list(_contact_cases()), ids=lambda v: v if isinstance(v, str) else "")
def test_criterion_03_contact_checks(label, alpha, expected):
    def body():
        got = check_contact(alpha)
        return got == expected, f"{label}: got {got}"

    run_criterion(3, f"contact check: {label}", 1.0, body)


# inversions ---------------------------------------------------------------

EVEN_TENSOR = ("d_t*d_z + t^-1*(d_z*(p1*d_p1 + th1*d_th1 + th2*d_th2) + d_x1*d_p1"
               " - 1/2*d_th1^2 + 1/2*d_th2^2)")
ODD_TENSOR = "-d_t*d_xi + t^-1*(d_x1*d_th1 + d_x2*d_th2 - d_th1*th1*d_xi - d_th2*th2*d_xi)"


def _courant_inversion_specs():
    return [CourantSpec(0, 1, ((1,),)),
            CourantSpec(1, 2, ((0, 1), (1, 0))),
            CourantSpec(1, 3, ((1, 0, 0), (0, 2, 0), (0, 0, -1))),
            CourantSpec(0, 3, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))]


def test_criterion_04_inversions():
    def body():
        problems = []
        for label, alpha, text in (("even normal form", even_normal_form(1, (1, -1)), EVEN_TENSOR),
                                   ("odd normal form", odd_normal_form(2), ODD_TENSOR)):
            omega = symplectize(alpha)
            inv = invert_two_form(omega)
            hc = inv.hamiltonian.chart
            expected = hc.parse(text)
            if inv.hamiltonian != expected:
                problems.append(f"{label}: J = {inv.hamiltonian}, displayed {expected}")
            back = tensor_to_form(omega.chart, inv.hamiltonian, inv.hamiltonian_carrier)
            if back is None or back.matrix != omega.matrix:
                problems.append(f"{label}: tensor_to_form does not round-trip")
        for spec in _courant_inversion_specs():
            si = invert_symplectic_form(spec)
            if not si.matches_displayed:
                extra = " (it equals the negative)" if si.matches_negated else ""
                problems.append(f"Courant chart q={spec.q}: inverse differs from the displayed tensor{extra}")
            omega = symplectic_form_matrix(spec)
            back = tensor_to_form(omega.chart, si.inversion.hamiltonian, si.inversion.hamiltonian_carrier)
            if back is None or back.matrix != omega.matrix:
                problems.append(f"Courant chart q={spec.q}: tensor_to_form does not round-trip")
        return not problems, "; ".join(problems)

    run_criterion(4, "two-form inversions and round trips", 2.0, body)


# Jacobi -------------------------------------------------------------------


def _jacobi_fixtures():
    r1 = make_chart([("x", 0), ("th", 1)])
    r2 = make_chart([("x", 0), ("y", 0)])
    r3 = make_chart([("x", 0), ("y", 0), ("z", 0)])
    return [
        ("odd triple on R^{1|1}", JacobiTriple.from_text(r1, 1, "th*d_x^2", "th*d_x", "th"), True),
        ("d_x d_y on R^2", JacobiTriple.from_text(r2, 0, "d_x*d_y"), True),
        ("Gamma = d_x on R^2", JacobiTriple.from_text(r2, 0, "0", "d_x"), True),
        ("odd th d_x^2 on R^{1|1}", JacobiTriple.from_text(r1, 1, "th*d_x^2"), True),
        ("y d_x d_y + d_y d_z on R^3", JacobiTriple.from_text(r3, 0, "y*d_x*d_y + d_y*d_z"), False),
        ("d_x d_y with Gamma = d_z on R^3", JacobiTriple.from_text(r3, 0, "d_x*d_y", "d_z"), False),
    ]


def test_criterion_05_jacobi():
    def body():
        problems = []
        fixtures = _jacobi_fixtures()
        ex = check_jacobi(fixtures[0][1])
        if not ex.passed or len(ex.residuals) != 4 or any(not v.is_zero() for v in ex.residuals.values()):
            problems.append(f"odd example residuals {ex.residuals}")
        bad = check_jacobi(fixtures[4][1])
        if bad.passed or bad.residuals["[L,L]-2GL"].is_zero():
            problems.append("failing triple has a vanishing [L,L] residual")
        for label, j, expected in fixtures:
            r = check_jacobi(j).passed
            hom = is_homological(_pcarrier(j), poissonize(j))
            if r != expected or hom != r:
                problems.append(f"{label}: check_jacobi={r}, homological={hom}, expected {expected}")
        return not problems, "; ".join(problems)

    run_criterion(5, "Jacobi conditions and poissonization", 2.0, body)


def _pcarrier(j):
    from supercontact.jacobi import poissonization

    return poissonization(j).carrier


# Legendre -----------------------------------------------------------------


def _legendre_charts():
    for n in (1, 2):
        eps = (1, -1)
        z, xs, ps, ths = even_normal_names(n, len(eps))
        yield (f"even, {n} pair(s)", even_normal_form(n, eps),
               lambda F, G, z=z, xs=xs, ps=ps, ths=ths, eps=eps: explicit_legendre_even(F, G, z, xs, ps, ths, eps), 0)
    for n in (1, 2):
        xi, xs, ths = odd_normal_names(n)
        yield (f"odd, {n} pair(s)", odd_normal_form(n),
               lambda F, G, xi=xi, xs=xs, ths=ths: explicit_legendre_odd(F, G, xi, xs, ths), 1)


def test_criterion_06_legendre():
    def body():
        problems = []
        for label, alpha, explicit, k in _legendre_charts():
            rng = random.Random(0)
            chart = alpha.chart
            mismatches = 0
            first = None
            for _ in range(200):
                F = random_polynomial(chart, rng, 2, parity=rng.randint(0, 1))
                G = random_polynomial(chart, rng, 2, parity=rng.randint(0, 1))
                a, b = legendre_bracket(alpha, F, G), explicit(F, G)
                if a != b:
                    mismatches += 1
                    first = first or f"F={F}, G={G}: derived {a}, explicit {b}"
            if mismatches:
                problems.append(f"{label}: {mismatches}/200 mismatches, e.g. {first}")
            rep = check_bracket_axioms(lambda F, G, alpha=alpha: legendre_bracket(alpha, F, G), chart, k, 100, 0, 2)
            if not rep.passed:
                problems.append(f"{label}: axioms fail {rep.failures}")
        return not problems, "; ".join(p[:160] for p in problems)

    run_criterion(6, "Legendre bracket vs coordinate formulas; axioms", 10.0, body)


# cohomology ---------------------------------------------------------------


def test_criterion_07_cohomology():
    def body():
        problems = []
        for m in (0, 1, 2):
            ok, mism = twisted_matrix_matches(m, 2)
            if not ok:
                problems.append(f"m={m}: twisted operator mismatch {mism[:1]}")
            for trunc in (0, 1, 2, 3):
                if not check_complex(kirillov_complex(m, trunc)):
                    problems.append(f"m={m}, truncation {trunc}: d^2 != 0")
        point = cohomology_dims(kirillov_complex(0, 3))
        if point[:2] != [0, 0]:
            problems.append(f"point base H = {point}")
        line = cohomology_dims(kirillov_complex(1, 3))
        if any(line):
            problems.append(f"m=1 H = {line}")
        return not problems, "; ".join(problems)

    run_criterion(7, "twisted de Rham operator and truncated cohomology", 5.0, body)


# Courant ------------------------------------------------------------------


def random_spec(rng):
    m = rng.randint(0, 2)
    q = rng.randint(1, 3)
    base = base_chart(m)
    while True:
        sym = [[Fraction(0)] * q for _ in range(q)]
        for i in range(q):
            for j in range(i, q):
                sym[i][j] = sym[j][i] = Fraction(rng.randint(-2, 2))
        try:
            CourantSpec(m, q, sym)
            break
        except Exception:
            continue
    poly = lambda: random_polynomial(base, rng, 1, max_terms=2)
    r_coef = tuple(tuple(poly() for _ in range(m)) for _ in range(q))
    r_scalar = tuple(poly() for _ in range(q))
    A = tuple(((i, j, k), poly()) for i, j, k in itertools.combinations(range(1, q + 1), 3))
    return CourantSpec(m, q, sym, r_coef, r_scalar, A)


EXACT = CourantSpec(1, 2, ((0, 1), (1, 0)), r_coef=((1,), (0,)))
SO3 = CourantSpec(0, 3, ((1, 0, 0), (0, 1, 0), (0, 0, 1)), A=(((1, 2, 3), 1),))
Q4 = CourantSpec(0, 4, tuple(tuple(int(i == j) for j in range(4)) for i in range(4)),
                 A=(((1, 2, 3), 1), ((1, 3, 4), 1)))


def test_criterion_08_courant():
    def body():
        problems = []
        rng = random.Random(0)
        for n in range(10):
            spec = random_spec(rng)
            if not roundtrip_matches(spec):
                problems.append(f"random spec {n} does not round-trip")
        for label, spec, expected in (("exact Courant", EXACT, True), ("so(3)", SO3, True), ("q=4", Q4, False)):
            got = check_master_equation(spec).passed
            if got != expected:
                problems.append(f"{label}: master equation {'passes' if got else 'fails'}, expected "
                                f"{'pass' if expected else 'fail'}")
            if not got:
                continue
            data = courant_data(spec)
            for key in ("invariance", "anchor_pairing", "homomorphism", "polarized_symmetric"):
                if data.residuals[key]:
                    problems.append(f"{label}: {key} residual {data.residuals[key][0]}")
            t = courant_model(spec).chart.gen("t")
            for (i, j), v in data.pairing.items():
                if v != t.scale(spec.g[i - 1][j - 1]):
                    problems.append(f"{label}: <e{i},e{j}> = {v}")
        return not problems, "; ".join(problems)

    run_criterion(8, "Courant round trip, master equation, axioms, pairing", 10.0, body)


# Wade ---------------------------------------------------------------------


def monomial_sections(base, max_degree):
    monos = [base.zero() + _mono(base, m) for m in monomials_up_to(base, max_degree)]
    for mono in monos:
        for n in base.names:
            yield WadeSection(base, X=((n, mono),), f=base.zero(), alpha=(), g=base.zero())
            yield WadeSection(base, X=(), f=base.zero(), alpha=((n, mono),), g=base.zero())
        yield WadeSection(base, X=(), f=mono, alpha=(), g=base.zero())
        yield WadeSection(base, X=(), f=base.zero(), alpha=(), g=mono)


def _mono(base, m):
    from supercontact.algebra import SuperPolynomial

    return SuperPolynomial.from_terms(base, {m: 1})


def test_criterion_09_wade():
    def body():
        problems = []
        r1 = base_chart(1)
        x = r1.gen("x1")
        ex1 = wade_bracket(WadeSection.make(r1, X={"x1": 1}), WadeSection.make(r1, alpha={"x1": x}))
        if ex1 != WadeSection.make(r1, alpha={"x1": 1}):
            problems.append(f"example 1 gives {ex1}")
        a = {"x1": x * x + 1}
        ex2 = wade_bracket(WadeSection.make(r1, f=1), WadeSection.make(r1, alpha=a))
        if ex2 != WadeSection.make(r1, alpha=a):
            problems.append(f"example 2 gives {ex2}")
        s = WadeSection.make(r1, X={"x1": x}, f=2, alpha={"x1": 3}, g=x)
        if wade_pairing(s, s) != x * r1.const(3) + r1.const(2) * x:
            problems.append(f"pairing example gives {wade_pairing(s, s)}")
        for m in (1, 2):
            base = base_chart(m)
            model = wade_model(base)
            secs = list(monomial_sections(base, 2))
            bad = 0
            first = None
            for u in secs:
                for v in secs:
                    w, d = wade_bracket(u, v), model.bracket(u, v)
                    if w != d:
                        bad += 1
                        first = first or f"u={u}, v={v}: {w} vs {d}"
            if bad:
                problems.append(f"m={m}: {bad} mismatches, e.g. {first}")
        return not problems, "; ".join(problems)

    run_criterion(9, "Wade bracket equals the derived bracket", 10.0, body)


# CLI ----------------------------------------------------------------------


CLI_CASES = [
    ("check-contact", "ex41.gcm", 0, "CONTACT: yes"),
    ("check-contact", "ex42.gcm", 1, "CONTACT: no"),
    ("check-jacobi", "ex71.gcm", 0, "JACOBI: pass"),
]


@pytest.mark.parametrize("command,fixture,code,line", CLI_CASES, ids=[f"{c}-{f}" for c, f, _, _ in CLI_CASES])
def test_criterion_10_cli(command, fixture, code, line, tmp_path):
    def body():
        problems = []
        reports = []
        for n in range(2):
            out, err = StringIO(), StringIO()
            path = tmp_path / f"report{n}.json"
            got = cli.run([command, os.path.join(FIXTURES, fixture), "--json", str(path)], out, err)
            text = out.getvalue()
            if got != code:
                problems.append(f"exit code {got}, expected {code}")
            if line not in text.splitlines():
                problems.append(f"missing output line {line!r}")
            reports.append(path.read_bytes())
        if reports[0] != reports[1]:
            problems.append("JSON report differs between runs")
        report = json.loads(reports[0])
        if command == "check-jacobi" and any(v != "0" for v in report["residuals"].values()):
            problems.append(f"nonzero residuals {report['residuals']}")
        return not problems, "; ".join(problems)

    run_criterion(10, f"CLI {command} {fixture}", 1.0, body)
