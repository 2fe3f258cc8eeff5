import itertools
import random
from fractions import Fraction

import pytest

from supercontact.courant import (CourantSpec, WadeSection, base_chart, build_chart_and_hamiltonian,
                                  check_master_equation, courant_data, courant_model, extract_structure,
                                  invert_symplectic_form, loday_residuals, roundtrip_matches, wade_anchor,
                                  wade_bracket, wade_model, wade_pairing)
from supercontact.errors import DomainError, PreconditionError
from supercontact.sampling import random_polynomial

IDENTITY3 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
EXACT = CourantSpec(1, 2, ((0, 1), (1, 0)), r_coef=((1,), (0,)))
SO3 = CourantSpec(0, 3, IDENTITY3, A=(((1, 2, 3), 1),))
Q4 = CourantSpec(0, 4, tuple(tuple(int(i == j) for j in range(4)) for i in range(4)),
                 A=(((1, 2, 3), 1), ((1, 3, 4), 1)))


def random_spec(rng):
    m, q = rng.randint(0, 2), rng.randint(1, 3)
    base = base_chart(m)
    while True:
        g = [[Fraction(0)] * q for _ in range(q)]
        for i in range(q):
            for j in range(i, q):
                g[i][j] = g[j][i] = Fraction(rng.randint(-2, 2))
        try:
            CourantSpec(m, q, g)
            break
        except DomainError:
            continue
    poly = lambda: random_polynomial(base, rng, 1, max_terms=2)
    return CourantSpec(m, q, g, tuple(tuple(poly() for _ in range(m)) for _ in range(q)),
                       tuple(poly() for _ in range(q)),
                       tuple((ijk, poly()) for ijk in itertools.combinations(range(1, q + 1), 3)))


def test_spec_validation():
    with pytest.raises(DomainError):
        CourantSpec(0, 2, ((1, 1), (1, 1)))
    with pytest.raises(DomainError):
        CourantSpec(0, 2, ((1, 2), (0, 1)))
    with pytest.raises(DomainError):
        CourantSpec(0, 3, IDENTITY3, A=(((1, 2, 3), 1), ((2, 1, 3), 1)))


def test_antisymmetric_extension_of_A():
    assert SO3.A_entry(2, 1, 3) == SO3.base.const(-1)
    assert SO3.A_entry(3, 1, 2) == SO3.base.const(1)
    assert SO3.A_entry(1, 1, 2).is_zero()


def test_exact_courant_hamiltonian():
    c, H = build_chart_and_hamiltonian(EXACT)
    assert H == c.parse("th1*p1")


def test_so3_hamiltonian():
    c, H = build_chart_and_hamiltonian(SO3)
    assert H == c.parse("-t*th1*th2*th3")


def test_chart_layout():
    c, _ = build_chart_and_hamiltonian(EXACT)
    assert c.names == ("t", "x1", "th1", "th2", "z", "p1")
    assert [g.parity for g in c.generators] == [0, 0, 1, 1, 0, 0]
    assert c["t"].invertible


@pytest.mark.parametrize("spec", [EXACT, SO3], ids=["exact", "so3"])
def test_master_equation_passes(spec):
    assert check_master_equation(spec).passed
    assert not loday_residuals(spec)


def test_master_equation_fails_for_noncommuting_anchor():
    spec = CourantSpec(1, 2, ((0, 1), (1, 0)), r_coef=((1,), (base_chart(1).gen("x1"),)))
    assert not check_master_equation(spec).passed
    # basis triples alone do not see the defect; the anchor homomorphism does
    assert not loday_residuals(spec)
    data = courant_data(spec, require_master=False)
    assert data.residuals["homomorphism"]
    with pytest.raises(PreconditionError):
        courant_data(spec)


@pytest.mark.parametrize("spec", [EXACT, SO3, Q4], ids=["exact", "so3", "q4"])
def test_master_equation_iff_basis_loday_on_fixtures(spec):
    assert check_master_equation(spec).passed == (not loday_residuals(spec))


def _jacobiator_from_constants(q, A):
    """[e_i, e_j] = sum_k A_ijk e_k for g = I; returns nonzero Jacobiators."""
    def br(u, v):
        out = [Fraction(0)] * q
        for i, j, k in itertools.product(range(q), repeat=3):
            out[k] += u[i] * v[j] * A(i + 1, j + 1, k + 1)
        return out
    basis = [[Fraction(int(i == j)) for j in range(q)] for i in range(q)]
    bad = {}
    for a, b, c in itertools.combinations(range(q), 3):
        ea, eb, ec = basis[a], basis[b], basis[c]
        terms = [br(ea, br(eb, ec)), br(eb, br(ec, ea)), br(ec, br(ea, eb))]
        s = [sum(col) for col in zip(*terms)]
        if any(s):
            bad[(a + 1, b + 1, c + 1)] = s
    return bad


def test_q4_structure_constants_satisfy_jacobi():
    # The 3-form th1 th3 (th2 + th4) is decomposable, so the bracket is a Lie bracket.
    A = lambda i, j, k: Q4.A_entry(i, j, k).constant_term()
    assert _jacobiator_from_constants(4, A) == {}
    assert check_master_equation(Q4).passed
    assert not loday_residuals(Q4)


def test_indecomposable_three_form_fails():
    # Every 3-form in four dimensions is decomposable; th1 (th2 th3 + th4 th5) is not.
    g5 = tuple(tuple(int(i == j) for j in range(5)) for i in range(5))
    spec = CourantSpec(0, 5, g5, A=(((1, 2, 3), 1), ((1, 4, 5), 1)))
    A = lambda i, j, k: spec.A_entry(i, j, k).constant_term()
    assert _jacobiator_from_constants(5, A) != {}
    assert check_master_equation(spec).passed == (not _jacobiator_from_constants(5, A))


def test_so3_data():
    data = courant_data(SO3)
    t = courant_model(SO3).chart.gen("t")
    for i, j in itertools.product(range(1, 4), repeat=2):
        assert data.pairing[(i, j)] == t.scale(int(i == j))
    for i, j, k in itertools.product(range(1, 4), repeat=3):
        assert data.bracket_table[(i, j, k)] == t * SO3.A_entry(i, j, k).to_chart(t.chart)
    assert all(v.is_zero() for v in data.anchor.values())
    assert data.passed


def test_exact_courant_axioms():
    data = courant_data(EXACT)
    assert data.passed, {k: v[:1] for k, v in data.residuals.items() if v}


@pytest.mark.parametrize("seed", range(10))
def test_roundtrip_on_random_specs(seed):
    spec = random_spec(random.Random(seed))
    assert roundtrip_matches(spec)
    ex = extract_structure(spec)
    assert ex.as_spec(spec.m, spec.q) == spec


def test_inverse_of_symplectic_form_is_negated_display():
    for spec in (EXACT, SO3):
        si = invert_symplectic_form(spec)
        assert si.inversion.nondegenerate
        assert si.matches_negated and not si.matches_displayed


# Wade -------------------------------------------------------------------------

R1 = base_chart(1)
x = R1.gen("x1")


def test_wade_examples():
    u = WadeSection.make(R1, X={"x1": 1})
    v = WadeSection.make(R1, alpha={"x1": x})
    assert wade_bracket(u, v) == WadeSection.make(R1, alpha={"x1": 1})
    a = {"x1": x * x - 2}
    assert wade_bracket(WadeSection.make(R1, f=1), WadeSection.make(R1, alpha=a)) == WadeSection.make(R1, alpha=a)


def test_wade_pairing_diagonal():
    s = WadeSection.make(R1, X={"x1": x}, f=2, alpha={"x1": 3}, g=x)
    assert wade_pairing(s, s) == x.scale(3) + x.scale(2)


def test_wade_anchor():
    s = WadeSection.make(R1, X={"x1": x}, f=2)
    assert wade_anchor(s, x * x) == (x * x).scale(2) + (x * x).scale(2)


def test_wade_derived_pairing_and_anchor():
    model = wade_model(R1)
    t = model.chart.gen("t")
    s = WadeSection.make(R1, X={"x1": x}, f=2, alpha={"x1": 3}, g=x)
    u = WadeSection.make(R1, X={"x1": 1}, g=1)
    assert model.pairing(s, u) == t.scale(2) * wade_pairing(s, u).to_chart(model.chart)
    h = x * x
    assert model.anchor(s, t * h.to_chart(model.chart)) == t * wade_anchor(s, h).to_chart(model.chart)


def test_wade_sections_reject_odd_base():
    from supercontact.charts import make_chart

    with pytest.raises(DomainError):
        WadeSection.make(make_chart([("th", 1)]))


def test_wade_bracket_is_loday_on_samples():
    model = wade_model(R1)
    rng = random.Random(0)

    def rnd():
        p = lambda: random_polynomial(R1, rng, 1, max_terms=2)
        return WadeSection.make(R1, X={"x1": p()}, f=p(), alpha={"x1": p()}, g=p())

    for _ in range(5):
        a, b, c = rnd(), rnd(), rnd()
        lhs = wade_bracket(a, wade_bracket(b, c))
        rhs_1 = wade_bracket(wade_bracket(a, b), c)
        rhs_2 = wade_bracket(b, wade_bracket(a, c))
        enc = model.encode
        assert enc(lhs) == enc(rhs_1) + enc(rhs_2)
