"""Cartan calculus on polynomial differential forms.

Forms are polynomials on the parity-reversed tangent chart: the velocity
``dy`` of a coordinate ``y`` has parity ``g(y) + 1``.  A vector field is a
mapping from base coordinate names to (left) coefficients on the same chart.
"""

from __future__ import annotations

from typing import Dict, Mapping

from .algebra import SuperPolynomial
from .charts import Chart, tangent_lift_chart
from .errors import PreconditionError

VectorField = Mapping[str, SuperPolynomial]


def form_chart(c: Chart, prefix: str = "d") -> Chart:
    return tangent_lift_chart(c, reverse_fiber_parity=True, prefix=prefix)


def _pairs(chart: Chart):
    if not chart.tangent_pairs and chart.generators:
        raise PreconditionError("forms need a tangent-lifted chart")
    return chart.tangent_pairs


def exterior_derivative(w: SuperPolynomial) -> SuperPolynomial:
    """d = sum_i dy^i d/dy^i (left derivatives)."""
    out = SuperPolynomial.zero(w.chart)
    for y, dy in _pairs(w.chart):
        dw = w.derivative(y)
        if dw:
            out = out + w.chart.gen(dy) * dw
    return out


def vector_field_parity(X: VectorField, chart: Chart) -> int:
    parities = set()
    for y, coef in X.items():
        for p, _ in coef.parity_components():
            parities.add((p + chart[y].parity) % 2)
    if len(parities) > 1:
        raise PreconditionError("vector field is not parity-homogeneous")
    return parities.pop() if parities else 0


def contract(X: VectorField, w: SuperPolynomial) -> SuperPolynomial:
    """i_X = sum_i X^i d/d(dy^i)."""
    out = SuperPolynomial.zero(w.chart)
    vel = dict(_pairs(w.chart))
    for y, coef in X.items():
        if coef:
            out = out + coef * w.derivative(vel[y])
    return out


def lie_derivative(X: VectorField, w: SuperPolynomial) -> SuperPolynomial:
    """L_X = i_X d + (-1)^{g(X)} d i_X."""
    g = vector_field_parity(X, w.chart)
    a = contract(X, exterior_derivative(w))
    b = exterior_derivative(contract(X, w))
    return a - b if g else a + b


def apply_vector_field(X: VectorField, f: SuperPolynomial) -> SuperPolynomial:
    out = SuperPolynomial.zero(f.chart)
    for y, coef in X.items():
        if coef:
            out = out + coef * f.derivative(y)
    return out


def vector_field_bracket(X: VectorField, Y: VectorField, chart: Chart) -> Dict[str, SuperPolynomial]:
    """Graded commutator [X, Y] = XY - (-1)^{g(X)g(Y)} YX, componentwise."""
    gx, gy = vector_field_parity(X, chart), vector_field_parity(Y, chart)
    names = [g.name for g in chart.generators if g.name in X or g.name in Y]
    out = {}
    for y in names:
        a = apply_vector_field(X, Y.get(y, SuperPolynomial.zero(chart)))
        b = apply_vector_field(Y, X.get(y, SuperPolynomial.zero(chart)))
        v = a + b if (gx * gy) % 2 else a - b
        if v:
            out[y] = v
    return out
