"""Contact forms, their symplectization, and the induced brackets.

A one-form ``alpha`` on a chart is symplectized to ``omega = d(t alpha)`` on
``R^x x M``.  The 2-form is stored through its contraction matrix

    M_ij = (d/d(dy^i) omega) d<-/d(dy^j),   omega = 1/2 sum_ij dy^i M_ij dy^j,

and the Poisson table is ``{y^i, y^j} = (-1)^{g(y^i)} (M^{-1})_ij``, i.e. the
bracket ``X_F(G)`` for the Hamiltonian field ``i_{X_F} omega = (-1)^{g(F)} dF``.
The parity twist is what makes the result graded antisymmetric.
The Poisson tensor is also returned as a quadratic Hamiltonian ``J`` on the
shifted cotangent chart (odd momenta for an even form, even momenta for an
odd one) whose derived bracket ``{{F, J}, G}`` reproduces ``P``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra import MIXED, SuperPolynomial
from .brackets import BracketCarrier, canonical_bracket, derived_bracket
from .charts import Chart, cotangent_lift_chart, extend_with_fiber, make_chart
from .errors import (ChartMismatchError, ContactRequiredError, DomainError,
                     InternalConsistencyError, PreconditionError)
from .forms import exterior_derivative, form_chart
from .linalg import invert_supermatrix, matmul

MOMENTUM_PREFIX = "d_"


@dataclass(frozen=True)
class OneForm:
    """alpha = sum_a alpha_a dx^a with coefficients on ``chart``."""

    chart: Chart
    coefficients: Tuple  # ((name, SuperPolynomial), ...) in chart order
    parity: Optional[int] = None

    def __post_init__(self):
        coeffs = dict(self.coefficients)
        for name, c in coeffs.items():
            if name not in self.chart:
                raise DomainError(f"one-form references unknown generator {name!r}")
            if c.chart != self.chart:
                raise ChartMismatchError("one-form coefficient on a foreign chart")
        ordered = tuple((g.name, coeffs[g.name]) for g in self.chart.generators
                        if g.name in coeffs and not coeffs[g.name].is_zero())
        object.__setattr__(self, "coefficients", ordered)
        if self.parity is not None:
            total = self.total_parity()
            if total not in (MIXED, None) and (total + 1) % 2 != self.parity:
                raise DomainError("declared parity disagrees with the coefficients")

    @classmethod
    def from_mapping(cls, chart: Chart, coefficients: Mapping, parity: Optional[int] = None) -> "OneForm":
        conv = {}
        for k, v in coefficients.items():
            conv[k] = v if isinstance(v, SuperPolynomial) else SuperPolynomial.constant(chart, v)
        return cls(chart, tuple(conv.items()), parity)

    def coefficient(self, name: str) -> SuperPolynomial:
        return dict(self.coefficients).get(name, SuperPolynomial.zero(self.chart))

    def as_form(self, fchart: Optional[Chart] = None) -> SuperPolynomial:
        """The form as a polynomial on the parity-reversed tangent chart."""
        fchart = fchart or form_chart(self.chart)
        out = SuperPolynomial.zero(fchart)
        for name, c in self.coefficients:
            out = out + c.to_chart(fchart) * fchart.gen(fchart.velocity_of(name))
        return out

    def total_parity(self):
        """Parity of the form as a polynomial in (x, dx); ``None`` for the zero form."""
        w = self.as_form()
        return None if w.is_zero() else w.parity

    def scaled(self, psi: SuperPolynomial) -> "OneForm":
        return OneForm(self.chart, tuple((n, psi * c) for n, c in self.coefficients))

    def __str__(self):
        parts = [f"({c})*d{n}" for n, c in self.coefficients]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class TwoFormMatrix:
    """A 2-form on ``chart`` given by its full contraction matrix."""

    chart: Chart
    form_chart: Chart
    matrix: Tuple  # tuple of tuples of SuperPolynomial on ``chart``
    form: SuperPolynomial

    @classmethod
    def from_form(cls, w: SuperPolynomial, chart: Chart) -> "TwoFormMatrix":
        fchart = w.chart
        pairs = fchart.tangent_pairs
        rows = []
        for y, dy in pairs:
            first = w.derivative(dy)
            row = []
            for z, dz in pairs:
                entry = first.right_derivative(dz)
                if any(entry.uses(v) for _, v in pairs):
                    raise DomainError("form is not quadratic in the differentials")
                row.append(entry.to_chart(chart))
            rows.append(tuple(row))
        return cls(chart, fchart, tuple(rows), w)

    @classmethod
    def from_matrix(cls, chart: Chart, matrix: Sequence[Sequence[SuperPolynomial]],
                    fchart: Optional[Chart] = None) -> "TwoFormMatrix":
        fchart = fchart or form_chart(chart)
        pairs = fchart.tangent_pairs
        w = SuperPolynomial.zero(fchart)
        for i, (_, dy) in enumerate(pairs):
            for j, (_, dz) in enumerate(pairs):
                m = matrix[i][j]
                if m:
                    w = w + fchart.gen(dy) * m.to_chart(fchart) * fchart.gen(dz)
        w = w.scale(Fraction(1, 2))
        return cls(chart, fchart, tuple(tuple(r) for r in matrix), w)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(y for y, _ in self.form_chart.tangent_pairs)

    def entry(self, a: str, b: str) -> SuperPolynomial:
        return self.matrix[self.names.index(a)][self.names.index(b)]

    def is_closed(self) -> bool:
        return exterior_derivative(self.form).is_zero()

    @property
    def parity(self):
        return self.form.parity


def symplectize(alpha: OneForm, t_name: str = "t") -> TwoFormMatrix:
    """omega = d(t alpha) on R^x x M, with t adjoined as the first coordinate."""
    if alpha.chart.distinguished_t is not None:
        raise PreconditionError("one-form already lives on an extended chart")
    ext = extend_with_fiber(alpha.chart, t_name)
    fchart = form_chart(ext)
    a = OneForm(ext, tuple((n, c.to_chart(ext)) for n, c in alpha.coefficients)).as_form(fchart)
    w = exterior_derivative(fchart.gen(t_name) * a)
    return TwoFormMatrix.from_form(w, ext)


@dataclass(frozen=True)
class Inversion:
    """Outcome of inverting a 2-form."""

    nondegenerate: bool
    reason: str
    two_form: TwoFormMatrix
    poisson: Optional[Tuple] = None        # P^{ij} on the coordinate chart
    bracket_parity: Optional[int] = None
    carrier: Optional[BracketCarrier] = None       # Poisson bracket on the coordinate chart
    hamiltonian: Optional[SuperPolynomial] = None  # J on the shifted cotangent chart
    hamiltonian_carrier: Optional[BracketCarrier] = None

    def __bool__(self):
        return self.nondegenerate


def hamiltonian_chart(chart: Chart, bracket_parity: int) -> Chart:
    """Shifted cotangent chart carrying J: odd momenta for an even bracket, even momenta for an odd one."""
    return cotangent_lift_chart(chart, 1, reverse_momentum_parity=(bracket_parity == 0),
                                prefix=MOMENTUM_PREFIX)


def _elementary_constants(hb: BracketCarrier, names: Sequence[str]):
    chart = hb.chart
    mom = {y: chart.gen(chart.momentum_of(y)) for y in names}
    consts = {}
    for i, a in enumerate(names):
        for b in names[i:]:
            term = mom[a] * mom[b]
            if term.is_zero():
                continue
            v = derived_bracket(hb, term, chart.gen(a), chart.gen(b))
            consts[(a, b)] = v.constant_term()
    return consts


def poisson_table_to_hamiltonian(chart: Chart, table: Sequence[Sequence[SuperPolynomial]], bracket_parity: int):
    """Quadratic Hamiltonian J with {{y^i, J}, y^j} = table[i][j]; returns (J, carrier)."""
    hchart = hamiltonian_chart(chart, bracket_parity)
    hb = BracketCarrier.darboux(hchart)
    names = [g.name for g in chart.generators]
    consts = _elementary_constants(hb, names)
    k = hb.parity_of_bracket
    J = SuperPolynomial.zero(hchart)
    for i, a in enumerate(names):
        for j in range(i, len(names)):
            b = names[j]
            pij = table[i][j]
            if pij.is_zero():
                continue
            s = consts.get((a, b), 0)
            if s == 0:
                raise InternalConsistencyError(f"no quadratic term realises the bracket {{{a},{b}}}")
            coef = SuperPolynomial.zero(hchart)
            for par, comp in pij.parity_components():
                sign = -1 if ((chart[a].parity + k) * par) % 2 else 1
                coef = coef + comp.to_chart(hchart).scale(Fraction(sign) / s)
            term = hchart.gen(hchart.momentum_of(a)) * hchart.gen(hchart.momentum_of(b))
            J = J + coef * term
    # self-check: every derived coordinate bracket must reproduce the table
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            got = derived_bracket(hb, J, hchart.gen(a), hchart.gen(b))
            if got != table[i][j].to_chart(hchart):
                raise InternalConsistencyError(f"derived bracket {{{a},{b}}} does not reproduce the Poisson table")
    return J, hb


def hamiltonian_to_poisson_table(hb: BracketCarrier, J: SuperPolynomial, chart: Chart):
    names = [g.name for g in chart.generators]
    hchart = hb.chart
    rows = []
    for a in names:
        row = []
        for b in names:
            v = derived_bracket(hb, J, hchart.gen(a), hchart.gen(b))
            if any(v.uses(m) for m in hchart.momentum_names):
                raise DomainError("J is not quadratic in the momenta")
            row.append(v.to_chart(chart))
        rows.append(row)
    return rows


def _twist(chart: Chart, rows):
    """Multiply row i by (-1)^{g(y^i)}; an involution relating M^{-1} and the Poisson table."""
    return [[x if g.parity == 0 else -x for x in r] for g, r in zip(chart.generators, rows)]


def invert_two_form(omega: TwoFormMatrix) -> Inversion:
    """Invert a 2-form; degenerate forms give ``nondegenerate=False`` rather than an error."""
    n = len(omega.matrix)
    if any(len(r) != n for r in omega.matrix):
        raise DomainError("two-form matrix is not square")
    par = omega.form.parity
    if omega.form.is_zero():
        return Inversion(n == 0, "zero form" if n else "empty chart", omega)
    if par == MIXED:
        return Inversion(False, "form is not parity-homogeneous", omega)
    inv = invert_supermatrix([list(r) for r in omega.matrix])
    if inv is None:
        return Inversion(False, "body determinant is not a unit", omega)
    k = par
    chart = omega.chart
    names = [g.name for g in chart.generators]
    inv = _twist(chart, inv)
    entries = {(names[i], names[j]): inv[i][j] for i in range(n) for j in range(n) if inv[i][j]}
    carrier = BracketCarrier(chart, k, tuple((a, b, v) for (a, b), v in entries.items()))
    J, hb = poisson_table_to_hamiltonian(chart, inv, k)
    return Inversion(True, "nondegenerate", omega, tuple(tuple(r) for r in inv), k, carrier, J, hb)


def tensor_to_form(chart: Chart, J: SuperPolynomial, hb: BracketCarrier,
                   fchart: Optional[Chart] = None) -> Optional[TwoFormMatrix]:
    """Inverse direction: the 2-form whose Poisson tensor is the Hamiltonian ``J``."""
    table = hamiltonian_to_poisson_table(hb, J, chart)
    inv = invert_supermatrix(_twist(chart, table))
    if inv is None:
        return None
    return TwoFormMatrix.from_matrix(chart, inv, fchart)


def check_contact(alpha: OneForm) -> bool:
    omega = symplectize(alpha)
    if not omega.is_closed():
        raise InternalConsistencyError("d(t alpha) is not closed")
    return invert_two_form(omega).nondegenerate


@dataclass(frozen=True)
class ContactStructure:
    """Symplectization data of a contact form, cached for repeated bracket evaluation."""

    alpha: OneForm
    inversion: Inversion

    @property
    def extended_chart(self) -> Chart:
        return self.inversion.two_form.chart

    @property
    def parity(self) -> int:
        """Parity of the Poisson (and Legendre) bracket."""
        return self.inversion.bracket_parity

    def poisson(self, F: SuperPolynomial, G: SuperPolynomial) -> SuperPolynomial:
        """{F, G}_omega on the extended chart, via the derived bracket of J."""
        hb, J = self.inversion.hamiltonian_carrier, self.inversion.hamiltonian
        ext = self.extended_chart
        r = derived_bracket(hb, J, F.to_chart(hb.chart), G.to_chart(hb.chart))
        return r.to_chart(ext)

    def legendre(self, F: SuperPolynomial, G: SuperPolynomial) -> SuperPolynomial:
        base = self.alpha.chart
        ext = self.extended_chart
        tname = ext.distinguished_t
        for h in (F, G):
            if h.chart != base:
                raise ChartMismatchError("Legendre bracket arguments must be basic functions")
        t = ext.gen(tname)
        r = self.poisson(t * F.to_chart(ext), t * G.to_chart(ext)) * ext.gen(tname, -1)
        if r.uses(tname):
            raise InternalConsistencyError("Legendre bracket retained the fiber coordinate")
        return r.to_chart(base)


@lru_cache(maxsize=64)
def contact_structure(alpha: OneForm) -> ContactStructure:
    inv = invert_two_form(symplectize(alpha))
    if not inv.nondegenerate:
        raise ContactRequiredError(f"one-form is not contact ({inv.reason})")
    return ContactStructure(alpha, inv)


def legendre_bracket(alpha: OneForm, F: SuperPolynomial, G: SuperPolynomial) -> SuperPolynomial:
    """{F, G}_alpha defined by {tF, tG}_omega = t {F, G}_alpha."""
    return contact_structure(alpha).legendre(F, G)


# explicit coordinate formulas for the normal forms -------------------------


def explicit_legendre_even(F: SuperPolynomial, G: SuperPolynomial, z: str, xs: Sequence[str],
                           ps: Sequence[str], thetas: Sequence[str], eps: Sequence[int]) -> SuperPolynomial:
    """Closed-form Legendre bracket of the even normal form.

    Derivatives hitting ``F`` are right derivatives, those hitting ``G`` left
    derivatives; factors keep the order in which they are written.
    """
    R = lambda f, v: f.right_derivative(v)
    L = lambda f, v: f.derivative(v)
    ch = F.chart
    out = SuperPolynomial.zero(ch)
    Fz, Gz = R(F, z), L(G, z)
    for x, p in zip(xs, ps):
        pv = ch.gen(p)
        out = out + R(F, p) * pv * Gz - Fz * pv * L(G, p)
        out = out + R(F, p) * L(G, x) - R(F, x) * L(G, p)
    for th, e in zip(thetas, eps):
        tv = ch.gen(th)
        out = out + R(F, th) * tv * Gz - Fz * tv * L(G, th)
        out = out + (R(F, th) * L(G, th)).scale(e)
    return out + Fz * G - F * Gz


def explicit_legendre_odd(F: SuperPolynomial, G: SuperPolynomial, xi: str, xs: Sequence[str],
                          thetas: Sequence[str]) -> SuperPolynomial:
    """Closed-form Legendre bracket of the odd normal form, applied per parity component of ``F``.

    Same derivative placement as :func:`explicit_legendre_even`.
    """
    R = lambda f, v: f.right_derivative(v)
    L = lambda f, v: f.derivative(v)
    ch = F.chart
    out = SuperPolynomial.zero(ch)
    Gxi = L(G, xi)
    for par, Fc in F.parity_components():
        first = Fc * Gxi
        second = R(Fc, xi) * G
        for x, th in zip(xs, thetas):
            tv = ch.gen(th)
            first = first - R(Fc, x) * L(G, th) + R(Fc, th) * tv * Gxi
            second = second - R(Fc, th) * L(G, x) + R(Fc, xi) * tv * L(G, th)
        out = out + first + (second if par else -second)
    return out


def consistent_legendre_even(F: SuperPolynomial, G: SuperPolynomial, z: str, xs: Sequence[str],
                             ps: Sequence[str], thetas: Sequence[str], eps: Sequence[int]) -> SuperPolynomial:
    """Coordinate form of the derived-route Legendre bracket of the even normal form.

    It differs from :func:`explicit_legendre_even` in the odd-coordinate terms:
    the Euler part along th carries 1/2 and the eps term the opposite sign,
    as forced by the Jacobi identity.
    """
    R = lambda f, v: f.right_derivative(v)
    L = lambda f, v: f.derivative(v)
    ch = F.chart
    out = SuperPolynomial.zero(ch)
    Fz, Gz = R(F, z), L(G, z)
    for x, p in zip(xs, ps):
        pv = ch.gen(p)
        out = out + R(F, p) * pv * Gz - Fz * pv * L(G, p)
        out = out + R(F, p) * L(G, x) - R(F, x) * L(G, p)
    for th, e in zip(thetas, eps):
        tv = ch.gen(th)
        out = out + (R(F, th) * tv * Gz - Fz * tv * L(G, th)).scale(Fraction(1, 2))
        out = out - (R(F, th) * L(G, th)).scale(e)
    return out + Fz * G - F * Gz


def consistent_legendre_odd(F: SuperPolynomial, G: SuperPolynomial, xi: str, xs: Sequence[str],
                            thetas: Sequence[str]) -> SuperPolynomial:
    """Coordinate form of the derived-route Legendre bracket of the odd normal form."""
    R = lambda f, v: f.right_derivative(v)
    L = lambda f, v: f.derivative(v)
    ch = F.chart
    Fxi, Gxi = R(F, xi), L(G, xi)
    out = F * Gxi - Fxi * G
    for x, th in zip(xs, thetas):
        tv = ch.gen(th)
        out = out - R(F, th) * tv * Gxi + Fxi * tv * L(G, th)
        out = out - R(F, x) * L(G, th) + R(F, th) * L(G, x)
    return out
