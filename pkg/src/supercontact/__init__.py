"""Exact symbolic calculus for graded supercommutative algebras and graded contact geometry."""

from .algebra import Generator, SuperPolynomial, add, body, grade, multiply, parity_map, partial_derivative
from .charts import Chart, cotangent_lift_chart, extend_with_fiber, make_chart, tangent_lift_chart
from .brackets import BracketCarrier, canonical_bracket, derived_bracket, is_homological

__version__ = "0.1.0"
