import random

from hypothesis import given, settings, strategies as st

from supercontact.charts import make_chart
from supercontact.forms import (apply_vector_field, contract, exterior_derivative, form_chart, lie_derivative,
                                vector_field_bracket)
from supercontact.sampling import random_polynomial

BASE = make_chart([("x", 0), ("y", 0)])
F = form_chart(BASE)


def random_field(rng):
    return {n: random_polynomial(F, rng, 2, names=["x", "y"]) for n in BASE.names}


def test_exterior_derivative_of_function():
    assert exterior_derivative(F.parse("x^2*y")) == F.parse("2*x*y*dx + x^2*dy")


def test_contraction():
    assert contract({"x": F.const(1)}, F.parse("dx*dy")) == F.gen("dy")


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_d_squared_is_zero(seed):
    w = random_polynomial(F, random.Random(seed), 3)
    assert exterior_derivative(exterior_derivative(w)).is_zero()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_lie_derivative_commutes_with_d(seed):
    rng = random.Random(seed)
    X = random_field(rng)
    w = random_polynomial(F, rng, 3)
    assert lie_derivative(X, exterior_derivative(w)) == exterior_derivative(lie_derivative(X, w))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_lie_bracket_of_fields(seed):
    rng = random.Random(seed)
    X, Y = random_field(rng), random_field(rng)
    f = random_polynomial(F, rng, 3, names=["x", "y"])
    XY = vector_field_bracket(X, Y, F)
    lhs = apply_vector_field(XY, f)
    rhs = apply_vector_field(X, apply_vector_field(Y, f)) - apply_vector_field(Y, apply_vector_field(X, f))
    assert lhs == rhs
