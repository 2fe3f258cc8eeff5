"""Poisson brackets given by a coordinate table, derived brackets, homologicity.

A bracket of parity ``k`` on a chart with coordinates ``y^i`` is fixed by its
table ``P^{ij} = {y^i, y^j}``; on arbitrary functions it is

    {F, G} = sum_ij (F d<-/dy^i) P^{ij} (d->/dy^j G)

(right derivative on the left argument, left derivative on the right one).
This expression is a biderivation with the Koszul signs of a parity-``k``
bracket.  On a Darboux chart the table is constant and calibrated by
``{p_a, x^a} = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Tuple

from .algebra import SuperPolynomial
from .charts import Chart
from .errors import ChartMismatchError, DomainError, PreconditionError


@dataclass(frozen=True)
class BracketCarrier:
    """A chart together with the coordinate bracket table of a parity-``k`` bracket."""

    chart: Chart
    parity_of_bracket: int
    table: Tuple = field(default=())  # ((name_i, name_j, SuperPolynomial), ...)

    def __post_init__(self):
        if self.parity_of_bracket not in (0, 1):
            raise DomainError("bracket parity must be 0 or 1")
        for a, b, v in self.table:
            if a not in self.chart or b not in self.chart:
                raise DomainError(f"bracket table references unknown generators {a!r}, {b!r}")
            if v.chart != self.chart:
                raise ChartMismatchError("bracket table entries must live on the carrier chart")

    @classmethod
    def darboux(cls, chart: Chart) -> "BracketCarrier":
        """Canonical symplectic bracket of a (parity-reversed) cotangent lift."""
        if not chart.darboux_pairs:
            raise PreconditionError("chart without darboux pairs")
        k = chart.bracket_parity
        one = SuperPolynomial.constant(chart, 1)
        rows = []
        for x, p in chart.darboux_pairs:
            gx, gp = chart[x].parity, chart[p].parity
            rows.append((p, x, one))
            sign = -1 if ((gp + k) * (gx + k)) % 2 == 0 else 1
            rows.append((x, p, one.scale(sign)))
        return cls(chart, k, tuple(rows))

    @classmethod
    def from_table(cls, chart: Chart, parity: int, entries: Mapping) -> "BracketCarrier":
        """Build from ``{(a, b): value}``, completing by graded antisymmetry."""
        full: Dict[Tuple[str, str], SuperPolynomial] = {}
        for (a, b), v in entries.items():
            if not isinstance(v, SuperPolynomial):
                v = SuperPolynomial.constant(chart, v)
            if v.is_zero():
                continue
            full[(a, b)] = v
            sign = -1 if ((chart[a].parity + parity) * (chart[b].parity + parity)) % 2 == 0 else 1
            mirrored = v.scale(sign)
            if (b, a) in entries:
                other = entries[(b, a)]
                if not isinstance(other, SuperPolynomial):
                    other = SuperPolynomial.constant(chart, other)
                if other != mirrored:
                    raise DomainError(f"table entries ({a},{b}) and ({b},{a}) violate graded antisymmetry")
            full[(b, a)] = mirrored
        return cls(chart, parity, tuple((a, b, v) for (a, b), v in sorted(full.items(),
                                                                               key=lambda kv: (chart.index(kv[0][0]), chart.index(kv[0][1])))))

    def entry(self, a: str, b: str) -> SuperPolynomial:
        for x, y, v in self.table:
            if x == a and y == b:
                return v
        return SuperPolynomial.zero(self.chart)

    @property
    def k(self) -> int:
        return self.parity_of_bracket


def _check(b: BracketCarrier, *polys: SuperPolynomial):
    for f in polys:
        if f.chart is not b.chart and f.chart != b.chart:
            raise ChartMismatchError("operand does not live on the carrier chart")


def canonical_bracket(b: BracketCarrier, F: SuperPolynomial, G: SuperPolynomial) -> SuperPolynomial:
    """{F, G} for the carrier's coordinate table."""
    _check(b, F, G)
    if not b.table:
        return SuperPolynomial.zero(b.chart)
    right = {}
    left = {}
    out = SuperPolynomial.zero(b.chart)
    for i, j, pij in b.table:
        if i not in right:
            right[i] = F.right_derivative(i)
        if right[i].is_zero():
            continue
        if j not in left:
            left[j] = G.derivative(j)
        if left[j].is_zero():
            continue
        out = out + right[i] * pij * left[j]
    return out


def poisson_bracket(b: BracketCarrier, F, G) -> SuperPolynomial:
    return canonical_bracket(b, F, G)


def derived_bracket(b: BracketCarrier, H: SuperPolynomial, F: SuperPolynomial, G: SuperPolynomial) -> SuperPolynomial:
    """{{F, H}, G}."""
    return canonical_bracket(b, canonical_bracket(b, F, H), G)


def is_homological(b: BracketCarrier, H: SuperPolynomial) -> bool:
    return canonical_bracket(b, H, H).is_zero()


def antisymmetry_sign(k: int, gf: int, gg: int) -> int:
    """Sign s with {F,G} = s {G,F} for a parity-k bracket."""
    return -1 if ((gf + k) * (gg + k)) % 2 == 0 else 1


def jacobi_residual(b: BracketCarrier, F, G, E, bracket=None) -> SuperPolynomial:
    """{{F,G},E} - {F,{G,E}} + (-1)^{(g(F)+k)(g(G)+k)} {G,{F,E}} for parity-homogeneous F, G."""
    br = bracket or (lambda u, v: canonical_bracket(b, u, v))
    k = b.parity_of_bracket
    gf, gg = F.parity, G.parity
    sign = -1 if ((gf + k) * (gg + k)) % 2 else 1
    return br(br(F, G), E) - br(F, br(G, E)) + br(G, br(F, E)).scale(sign)
