from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from supercontact.algebra import SuperPolynomial, body, grade, parity_map, partial_derivative
from supercontact.charts import make_chart
from supercontact.errors import ChartMismatchError, DomainError

C = make_chart([("t", 0, (0,), True), ("x", 0, (0,)), ("p", 0, (1,)), ("th1", 1, (0,)), ("th2", 1, (0,))])
t, x, p, th1, th2 = C.gens("t", "x", "p", "th1", "th2")


def test_odd_generators_anticommute():
    assert th1 * th2 == C.parse("th1*th2")
    assert th2 * th1 == -(th1 * th2)
    assert (th1 * th1).is_zero()
    assert (th1 * th2 + th2 * th1).is_zero()


def test_laurent_cancellation():
    assert C.gen("t", -1) * x * (t * x) == x * x


def test_exact_rational_addition():
    assert (x.scale(Fraction(1, 2)) + x.scale(Fraction(1, 3))) == x.scale(Fraction(5, 6))
    assert (x + (-x)).is_zero()


def test_derivatives():
    assert partial_derivative(x * x, "x") == x.scale(2)
    assert partial_derivative(th2 * th1, "th1") == -th2
    assert partial_derivative(C.gen("t", -1), "t") == -C.gen("t", -2)


def test_right_derivative_sign():
    f = th1 * th2
    assert f.derivative("th1") == th2
    assert f.right_derivative("th1") == -th2
    assert f.right_derivative("th2") == th1


def test_grade_and_parity():
    assert grade(x * p) == (0, (1,))
    assert grade(x + p) == (0, "inhomogeneous")
    assert grade(C.zero()) == (0, "zero")
    assert (x + th1).parity == "mixed"
    assert (th1 * th2).parity == 0


def test_parity_map_and_body():
    assert parity_map(x + th1) == x - th1
    assert parity_map(th1 * th2) == th1 * th2
    assert body(x + th1 * th2 * x) == x
    assert body(th1).is_zero()
    assert body(C.gen("t", -1)) == C.gen("t", -1)


def test_chart_mismatch_rejected():
    other = make_chart([("x", 0)])
    with pytest.raises(ChartMismatchError):
        x + other.gen("x")


def test_negative_power_of_non_invertible_rejected():
    with pytest.raises(DomainError):
        C.gen("x", -1)


def test_canonical_printing_round_trips():
    f = C.parse("1/2*t^-1*x*th1 - 3*p^2 + th1*th2 + 7")
    assert C.parse(str(f)) == f


# properties -----------------------------------------------------------------

names = st.sampled_from(["x", "p", "th1", "th2", "t"])
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw):
    out = C.zero()
    for _ in range(draw(st.integers(0, 3))):
        term = C.const(draw(coeffs))
        for n in draw(st.lists(names, max_size=3)):
            term = term * C.gen(n)
        out = out + term
    return out


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_supercommutativity(a, b):
    for pa, A in a.parity_components():
        for pb, B in b.parity_components():
            assert A * B == (B * A).scale(-1 if pa * pb else 1)


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), names)
def test_graded_leibniz_rule(a, b, v):
    g = C[v].parity
    for pa, A in a.parity_components():
        sign = -1 if g * pa else 1
        assert (A * b).derivative(v) == A.derivative(v) * b + (A * b.derivative(v)).scale(sign)
