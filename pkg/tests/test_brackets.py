import random

from hypothesis import given, settings, strategies as st

from supercontact.brackets import BracketCarrier, canonical_bracket, derived_bracket, is_homological, jacobi_residual
from supercontact.charts import cotangent_lift_chart, make_chart
from supercontact.sampling import random_polynomial

BASE = make_chart([("x", 0), ("th", 1)])
EVEN = cotangent_lift_chart(BASE, 1)
ODD = cotangent_lift_chart(BASE, 1, reverse_momentum_parity=True)


def test_calibration_bracket():
    b = BracketCarrier.darboux(EVEN)
    assert canonical_bracket(b, EVEN.gen("p_x"), EVEN.gen("x")) == EVEN.const(1)


def test_constants_are_central():
    b = BracketCarrier.darboux(EVEN)
    x = EVEN.gen("x")
    assert canonical_bracket(b, x, x).is_zero()
    assert canonical_bracket(b, EVEN.const(1), EVEN.gen("p_x") * x).is_zero()


def test_odd_momentum_leibniz_example():
    b = BracketCarrier.darboux(EVEN)
    th, pi = EVEN.gen("th"), EVEN.gen(EVEN.momentum_of("th"))
    assert canonical_bracket(b, th * pi, th) == th


def test_derived_bracket_of_unit_vanishes():
    b = BracketCarrier.darboux(ODD)
    H = ODD.parse("xi_x*xi_x + th*xi_x")
    assert derived_bracket(b, H, ODD.const(1), ODD.gen("x")).is_zero()


def test_constant_quadratic_is_homological():
    c = cotangent_lift_chart(make_chart([("x", 0), ("y", 0)]), 1, reverse_momentum_parity=True)
    b = BracketCarrier.darboux(c)
    assert is_homological(b, c.parse("xi_x*xi_y"))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([EVEN, ODD]))
def test_canonical_bracket_satisfies_graded_jacobi(seed, chart):
    rng = random.Random(seed)
    b = BracketCarrier.darboux(chart)
    F, G, E = (random_polynomial(chart, rng, 2, parity=rng.randint(0, 1)) for _ in range(3))
    assert jacobi_residual(b, F, G, E).is_zero()
