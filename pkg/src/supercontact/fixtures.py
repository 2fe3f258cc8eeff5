"""Standard structures used throughout the tests and the command line examples."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .charts import Chart, make_chart
from .contact import OneForm


def even_normal_chart(n_pairs: int, n_thetas: int) -> Chart:
    spec = [("z", 0)]
    spec += [(f"x{a}", 0) for a in range(1, n_pairs + 1)]
    spec += [(f"p{a}", 0) for a in range(1, n_pairs + 1)]
    spec += [(f"th{j}", 1) for j in range(1, n_thetas + 1)]
    return make_chart(spec)


def even_normal_form(n_pairs: int = 1, eps: Sequence[int] = (1, -1)) -> OneForm:
    """alpha = dz - p_a dx^a + (eps_j / 2) th^j dth^j."""
    c = even_normal_chart(n_pairs, len(eps))
    coeffs = {"z": c.const(1)}
    for a in range(1, n_pairs + 1):
        coeffs[f"x{a}"] = -c.gen(f"p{a}")
    for j, e in enumerate(eps, start=1):
        coeffs[f"th{j}"] = c.gen(f"th{j}").scale(Fraction(e, 2))
    return OneForm.from_mapping(c, coeffs)


def even_normal_names(n_pairs: int, n_thetas: int):
    return ("z", [f"x{a}" for a in range(1, n_pairs + 1)], [f"p{a}" for a in range(1, n_pairs + 1)],
            [f"th{j}" for j in range(1, n_thetas + 1)])


def odd_normal_chart(n_pairs: int) -> Chart:
    spec = [("xi", 1)]
    spec += [(f"x{a}", 0) for a in range(1, n_pairs + 1)]
    spec += [(f"th{a}", 1) for a in range(1, n_pairs + 1)]
    return make_chart(spec)


def odd_normal_form(n_pairs: int = 2) -> OneForm:
    """alpha = dxi - th^a dx^a."""
    c = odd_normal_chart(n_pairs)
    coeffs = {"xi": c.const(1)}
    for a in range(1, n_pairs + 1):
        coeffs[f"x{a}"] = -c.gen(f"th{a}")
    return OneForm.from_mapping(c, coeffs)


def odd_normal_names(n_pairs: int):
    return ("xi", [f"x{a}" for a in range(1, n_pairs + 1)], [f"th{a}" for a in range(1, n_pairs + 1)])


def superline_chart() -> Chart:
    return make_chart([("x", 0), ("th", 1)])


def example_contact_form() -> OneForm:
    """dx + th dth on R^{1|1}."""
    c = superline_chart()
    return OneForm.from_mapping(c, {"x": 1, "th": c.gen("th")})


def example_non_contact_form() -> OneForm:
    """(1 + th) dx + th dth: the rescaling by an odd-containing factor destroys homogeneity."""
    c = superline_chart()
    return OneForm.from_mapping(c, {"x": c.const(1) + c.gen("th"), "th": c.gen("th")})
