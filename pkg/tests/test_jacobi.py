import pytest

from supercontact.charts import make_chart
from supercontact.errors import InvalidTripleError
from supercontact.jacobi import (JacobiTriple, check_jacobi, jacobi_bracket, poissonization_is_homological,
                                 poissonize, verify_jacobi_axioms)

R11 = make_chart([("x", 0), ("th", 1)])
R2 = make_chart([("x", 0), ("y", 0)])
R3 = make_chart([("x", 0), ("y", 0), ("z", 0)])


def example_triple():
    return JacobiTriple.from_text(R11, 1, "th*d_x^2", "th*d_x", "th")


def test_example_triple_passes_with_zero_residuals():
    rep = check_jacobi(example_triple())
    assert rep.passed
    assert len(rep.residuals) == 4
    assert all(v.is_zero() for v in rep.residuals.values())


def test_constant_bivector_passes():
    assert check_jacobi(JacobiTriple.from_text(R2, 0, "d_x*d_y")).passed


def test_failing_bivector_residual():
    rep = check_jacobi(JacobiTriple.from_text(R3, 0, "y*d_x*d_y + d_y*d_z"))
    assert not rep.passed
    L = rep.residuals["[L,L]-2GL"]
    assert L == L.chart.parse("-2*d_x*d_y*d_z")


def test_poissonization_of_example():
    J = poissonize(example_triple())
    assert J == J.chart.parse("t^-1*th*d_x^2 + th*d_t*d_x + t*th*d_t^2")


def test_poissonization_of_pure_bivector():
    j = JacobiTriple.from_text(R2, 0, "d_x*d_y")
    J = poissonize(j)
    assert J == J.chart.parse("t^-1*d_x*d_y")


def test_poissonization_even_with_vector_field():
    j = JacobiTriple.from_text(R2, 0, "d_x*d_y", "d_x")
    J = poissonize(j)
    assert J == J.chart.parse("t^-1*d_x*d_y + d_x*d_t")


@pytest.mark.parametrize("triple", [
    ("odd", R11, 1, "th*d_x^2", "th*d_x", "th"),
    ("even", R2, 0, "d_x*d_y", "0", "0"),
    ("even", R2, 0, "0", "d_x", "0"),
    ("even", R3, 0, "y*d_x*d_y + d_y*d_z", "0", "0"),
    ("even", R3, 0, "d_x*d_y", "d_z", "0"),
    ("odd", R11, 1, "th*d_x^2", "0", "0"),
])
def test_check_jacobi_iff_homological(triple):
    _, chart, k, L, G, f = triple
    j = JacobiTriple.from_text(chart, k, L, G, f)
    assert check_jacobi(j).passed == poissonization_is_homological(j)


def test_example_bracket_regression():
    j = example_triple()
    x = R11.gen("x")
    assert jacobi_bracket(j, x, x) == R11.parse("-2*th - 2*x*th - 2*x^2*th")
    assert jacobi_bracket(j, R11.const(1), R11.const(1)) == R11.parse("-2*th")


def test_poisson_case_kills_constants():
    j = JacobiTriple.from_text(R2, 0, "d_x*d_y")
    assert jacobi_bracket(j, R2.const(1), R2.parse("x*y + y^2")).is_zero()


def test_axioms_on_example():
    assert verify_jacobi_axioms(example_triple(), samples=100, seed=0).passed


def test_axioms_fail_on_failing_triple():
    rep = verify_jacobi_axioms(JacobiTriple.from_text(R3, 0, "y*d_x*d_y + d_y*d_z"), samples=30, seed=0)
    assert not rep.passed
    assert rep.failures["jacobi"] > 0


def test_even_structure_rejects_function():
    with pytest.raises(InvalidTripleError):
        JacobiTriple.from_text(R2, 0, "d_x*d_y", "0", "x")


def test_wrong_fiber_degree_rejected():
    with pytest.raises(InvalidTripleError):
        JacobiTriple.from_text(R2, 0, "d_x")
