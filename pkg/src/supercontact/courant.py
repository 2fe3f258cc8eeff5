"""Contact Courant algebroids in Darboux coordinates and the Wade bracket.

Coordinates ``(t, x^a, th^i, z, p_a)`` of weights ``(0, 0, 1, 2, 2)``; the
Poisson structure is

    {z, t} = 1,   {p_a, x^a} = 1,   {th^i, th^j} = g^{ij} / t,

and a spec ``(g, r, r0, A)`` gives the cubic Hamiltonian

    H = th^i (r_i^a p_a + r_i t z) - (t/6) A_ijk th^i th^j th^k.

Sections are the weight-one functions ``e_i = t g_ij th^j``; the bracket is
the derived bracket ``{{e, H}, e'}``, the pairing ``{e, e'}`` and the anchor
``rho(e) f = {{e, H}, f}``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from sympy import Matrix as SymMatrix, Rational

from .algebra import SuperPolynomial
from .brackets import BracketCarrier, canonical_bracket, derived_bracket, is_homological
from .charts import Chart, cotangent_lift_chart, make_chart, tangent_lift_chart
from .contact import TwoFormMatrix, invert_two_form
from .errors import DomainError, PreconditionError
from .forms import (apply_vector_field, contract, exterior_derivative, lie_derivative,
                    vector_field_bracket)
from .sampling import random_polynomial


def base_chart(m: int) -> Chart:
    return make_chart([(f"x{a}", 0) for a in range(1, m + 1)])


def _rational_inverse(g):
    M = SymMatrix([[Rational(v.numerator, v.denominator) for v in row] for row in g])
    if M.det() == 0:
        raise DomainError("pairing matrix g is singular")
    inv = M.inv()
    return tuple(tuple(Fraction(int(v.p), int(v.q)) for v in inv.row(i)) for i in range(M.rows))


@dataclass(frozen=True)
class CourantSpec:
    """Structure data: constant symmetric ``g``, anchor ``r_i^a(x)``, ``r_i(x)``, skew ``A_ijk(x)``.

    Polynomial entries live on :func:`base_chart` ``(m)``; ``A`` is given as
    ``((i, j, k), value)`` items with ``i < j < k`` (1-based), extended by
    total antisymmetry.
    """

    m: int
    q: int
    g: Tuple
    r_coef: Tuple = None
    r_scalar: Tuple = None
    A: Tuple = ()

    def __post_init__(self):
        base = base_chart(self.m)
        g = tuple(tuple(Fraction(v) for v in row) for row in self.g)
        if len(g) != self.q or any(len(r) != self.q for r in g):
            raise DomainError("g must be a q x q matrix")
        if any(g[i][j] != g[j][i] for i in range(self.q) for j in range(self.q)):
            raise DomainError("g must be symmetric")
        _rational_inverse(g)
        object.__setattr__(self, "g", g)
        zero = base.zero()
        rc = self.r_coef or tuple(tuple(zero for _ in range(self.m)) for _ in range(self.q))
        rs = self.r_scalar or tuple(zero for _ in range(self.q))
        rc = tuple(tuple(_coerce(v, base) for v in row) for row in rc)
        rs = tuple(_coerce(v, base) for v in rs)
        if len(rc) != self.q or any(len(r) != self.m for r in rc) or len(rs) != self.q:
            raise DomainError("anchor data has the wrong shape")
        object.__setattr__(self, "r_coef", rc)
        object.__setattr__(self, "r_scalar", rs)
        entries = {}
        for (i, j, k), v in (self.A.items() if isinstance(self.A, Mapping) else self.A):
            v = _coerce(v, base)
            if len({i, j, k}) < 3:
                if not v.is_zero():
                    raise DomainError("A must be totally antisymmetric")
                continue
            if not all(1 <= n <= self.q for n in (i, j, k)):
                raise DomainError("A index out of range")
            key, sign = _sort3(i, j, k)
            v = v.scale(sign)
            if key in entries and entries[key] != v:
                raise DomainError("A must be totally antisymmetric")
            entries[key] = v
        object.__setattr__(self, "A", tuple(sorted((k, v) for k, v in entries.items() if not v.is_zero())))

    @property
    def base(self) -> Chart:
        return base_chart(self.m)

    @property
    def g_inverse(self):
        return _rational_inverse(self.g)

    def A_entry(self, i: int, j: int, k: int) -> SuperPolynomial:
        if len({i, j, k}) < 3:
            return self.base.zero()
        key, sign = _sort3(i, j, k)
        for kk, v in self.A:
            if kk == key:
                return v.scale(sign)
        return self.base.zero()


def _coerce(v, chart):
    if isinstance(v, SuperPolynomial):
        return v.to_chart(chart) if v.chart != chart else v
    if isinstance(v, str):
        return chart.parse(v)
    return chart.const(v)


def _sort3(i, j, k):
    idx = [i, j, k]
    sign = 1
    for a in range(3):
        for b in range(2 - a):
            if idx[b] > idx[b + 1]:
                idx[b], idx[b + 1] = idx[b + 1], idx[b]
                sign = -sign
    return tuple(idx), sign


def courant_chart(m: int, q: int) -> Chart:
    spec = [("t", 0, (0, 1), True)]
    spec += [(f"x{a}", 0, (0, 0)) for a in range(1, m + 1)]
    spec += [(f"th{i}", 1, (1, 0)) for i in range(1, q + 1)]
    spec += [("z", 0, (2, 0))]
    spec += [(f"p{a}", 0, (2, 1)) for a in range(1, m + 1)]
    return make_chart(spec)


def courant_carrier(spec: CourantSpec) -> BracketCarrier:
    """The coordinate Poisson table displayed in the module docstring."""
    c = courant_chart(spec.m, spec.q)
    ginv = spec.g_inverse
    tinv = c.gen("t", -1)
    entries = {("z", "t"): c.const(1)}
    for a in range(1, spec.m + 1):
        entries[(f"p{a}", f"x{a}")] = c.const(1)
    for i in range(spec.q):
        for j in range(i, spec.q):
            if ginv[i][j]:
                entries[(f"th{i + 1}", f"th{j + 1}")] = tinv.scale(ginv[i][j])
    return BracketCarrier.from_table(c, 0, entries)


def symplectic_form_matrix(spec: CourantSpec) -> TwoFormMatrix:
    """omega = dz dt + dp_a dx^a + (t/2) g_ij dth^i dth^j, as a 2-form matrix."""
    c = courant_chart(spec.m, spec.q)
    fchart = tangent_lift_chart(c, True)
    d = lambda n: fchart.gen(fchart.velocity_of(n))
    w = d("z") * d("t")
    for a in range(1, spec.m + 1):
        w = w + d(f"p{a}") * d(f"x{a}")
    t = fchart.gen("t")
    for i in range(spec.q):
        for j in range(spec.q):
            if spec.g[i][j]:
                w = w + (t * d(f"th{i + 1}") * d(f"th{j + 1}")).scale(spec.g[i][j] / 2)
    return TwoFormMatrix.from_form(w, c)


@dataclass(frozen=True)
class CourantModel:
    spec: CourantSpec
    carrier: BracketCarrier
    hamiltonian: SuperPolynomial

    @property
    def chart(self) -> Chart:
        return self.carrier.chart

    def section(self, i: int) -> SuperPolynomial:
        """e_i = t g_ij th^j (1-based)."""
        c = self.chart
        out = c.zero()
        for j in range(self.spec.q):
            if self.spec.g[i - 1][j]:
                out = out + (c.gen("t") * c.gen(f"th{j + 1}")).scale(self.spec.g[i - 1][j])
        return out

    def bracket(self, e1, e2):
        return derived_bracket(self.carrier, self.hamiltonian, e1, e2)

    def pairing(self, e1, e2):
        return canonical_bracket(self.carrier, e1, e2)

    def anchor(self, e, f):
        return canonical_bracket(self.carrier, canonical_bracket(self.carrier, e, self.hamiltonian), f)


def build_chart_and_hamiltonian(spec: CourantSpec):
    model = courant_model(spec)
    return model.chart, model.hamiltonian


@lru_cache(maxsize=128)
def courant_model(spec: CourantSpec) -> CourantModel:
    b = courant_carrier(spec)
    c = b.chart
    t, z = c.gen("t"), c.gen("z")
    H = c.zero()
    for i in range(1, spec.q + 1):
        th = c.gen(f"th{i}")
        inner = spec.r_scalar[i - 1].to_chart(c) * t * z
        for a in range(1, spec.m + 1):
            inner = inner + spec.r_coef[i - 1][a - 1].to_chart(c) * c.gen(f"p{a}")
        H = H + th * inner
    cubic = c.zero()
    for i, j, k in itertools.product(range(1, spec.q + 1), repeat=3):
        a = spec.A_entry(i, j, k)
        if a:
            cubic = cubic + a.to_chart(c) * c.gen(f"th{i}") * c.gen(f"th{j}") * c.gen(f"th{k}")
    H = H - (t * cubic).scale(Fraction(1, 6))
    return CourantModel(spec, b, H)


@dataclass(frozen=True)
class MasterReport:
    passed: bool
    residual: SuperPolynomial


def check_master_equation(spec: CourantSpec) -> MasterReport:
    model = courant_model(spec)
    res = canonical_bracket(model.carrier, model.hamiltonian, model.hamiltonian)
    return MasterReport(res.is_zero(), res)



def displayed_poisson_tensor(spec: CourantSpec) -> SuperPolynomial:
    """J = d_t d_z + d_x^a d_p_a - (1/2t) g^{ij} d_th^i d_th^j on the shifted cotangent chart."""
    from .contact import hamiltonian_chart

    c = courant_chart(spec.m, spec.q)
    hc = hamiltonian_chart(c, 0)
    d = lambda n: hc.gen(hc.momentum_of(n))
    J = d("t") * d("z")
    for a in range(1, spec.m + 1):
        J = J + d(f"x{a}") * d(f"p{a}")
    ginv = spec.g_inverse
    tinv = hc.gen("t", -1)
    for i in range(spec.q):
        for j in range(spec.q):
            if ginv[i][j]:
                J = J - (tinv * d(f"th{i + 1}") * d(f"th{j + 1}")).scale(ginv[i][j] / 2)
    return J


@dataclass(frozen=True)
class SymplecticInversion:
    inversion: object              # contact.Inversion of the 2-form
    displayed: SuperPolynomial     # the displayed Poisson tensor
    matches_displayed: bool
    matches_negated: bool


def invert_symplectic_form(spec: CourantSpec) -> SymplecticInversion:
    """Invert omega = dz dt + dp dx + (t/2) g dth dth and compare with the displayed tensor."""
    inv = invert_two_form(symplectic_form_matrix(spec))
    J = displayed_poisson_tensor(spec)
    if not inv.nondegenerate:
        return SymplecticInversion(inv, J, False, False)
    got = inv.hamiltonian.to_chart(J.chart)
    return SymplecticInversion(inv, J, got == J, got == -J)


@dataclass(frozen=True)
class ExtractedData:
    """Structure data read back from the derived brackets."""

    g: Tuple
    r_coef: Tuple
    r_scalar: Tuple
    A: Tuple            # ((i, j, k), value) for i < j < k
    A_full: Dict        # (i, j, k) -> value for all index triples (1-based)

    def as_spec(self, m: int, q: int) -> CourantSpec:
        return CourantSpec(m, q, self.g, self.r_coef, self.r_scalar, self.A)


def extract_structure(spec: CourantSpec) -> ExtractedData:
    """Read (g, r, A) off the derived brackets of the model built from ``spec``.

    g from <e_i, e_j> = t g_ij; r from rho(e_i) = r_i^a d_a + r_i t d_t; A from
    <{e_i, e_j}, e_k> = t A_ijk + t (r_i g_jk - r_j g_ik + r_k g_ij), the
    second group of terms coming from {z, t} = 1.  No master equation is
    needed for the extraction itself.
    """
    M = courant_model(spec)
    c = M.chart
    base = spec.base
    t = c.gen("t")
    tinv = c.gen("t", -1)
    E = [M.section(i) for i in range(1, spec.q + 1)]
    g = []
    for i in range(spec.q):
        row = []
        for j in range(spec.q):
            v = M.pairing(E[i], E[j]) * tinv
            if not v.is_constant():
                raise PreconditionError("pairing is not t times a constant")
            row.append(v.constant_term())
        g.append(tuple(row))
    r_scalar = tuple((M.anchor(E[i], t) * tinv).to_chart(base) for i in range(spec.q))
    r_coef = tuple(tuple(M.anchor(E[i], c.gen(f"x{a}")).to_chart(base) for a in range(1, spec.m + 1))
                   for i in range(spec.q))
    rs = [v.to_chart(c) for v in r_scalar]
    full = {}
    for i in range(spec.q):
        for j in range(spec.q):
            B = M.bracket(E[i], E[j])
            for k in range(spec.q):
                T = M.pairing(B, E[k])
                corr = t * (rs[i].scale(g[j][k]) - rs[j].scale(g[i][k]) + rs[k].scale(g[i][j]))
                full[(i + 1, j + 1, k + 1)] = ((T - corr) * tinv).to_chart(base)
    A = tuple(((i, j, k), full[(i, j, k)]) for (i, j, k) in sorted(full)
              if i < j < k and not full[(i, j, k)].is_zero())
    return ExtractedData(tuple(g), r_coef, r_scalar, A, full)


def roundtrip_matches(spec: CourantSpec) -> bool:
    """build followed by extraction gives back exactly (g, r, A)."""
    ex = extract_structure(spec)
    if ex.g != spec.g or ex.r_coef != spec.r_coef or ex.r_scalar != spec.r_scalar:
        return False
    for (i, j, k), v in ex.A_full.items():
        if v != spec.A_entry(i, j, k):
            return False
    return True


def loday_residuals(spec: CourantSpec) -> Dict[Tuple[int, int, int], SuperPolynomial]:
    """{e_i,{e_j,e_k}} - {{e_i,e_j},e_k} - {e_j,{e_i,e_k}} on basis triples (nonzero entries only)."""
    M = courant_model(spec)
    E = [M.section(i) for i in range(1, spec.q + 1)]
    out = {}
    for i, j, k in itertools.product(range(spec.q), repeat=3):
        res = (M.bracket(E[i], M.bracket(E[j], E[k])) - M.bracket(M.bracket(E[i], E[j]), E[k])
               - M.bracket(E[j], M.bracket(E[i], E[k])))
        if not res.is_zero():
            out[(i + 1, j + 1, k + 1)] = res
    return out


@dataclass(frozen=True)
class CourantData:
    spec: CourantSpec
    pairing: Dict           # (i, j) -> <e_i, e_j>
    bracket_table: Dict     # (i, j, k) -> <{e_i, e_j}, e_k>
    anchor: Dict            # (i, name) -> rho(e_i)(name) for name in t, x^a
    extracted: ExtractedData
    residuals: Dict         # axiom label -> list of nonzero residual polynomials

    @property
    def passed(self) -> bool:
        return not any(self.residuals.values())


def _basic_functions(c: Chart, m: int):
    t = c.gen("t")
    fs = [t] + [c.gen(f"x{a}") for a in range(1, m + 1)]
    if m:
        fs.append(t * c.gen("x1") * c.gen("x1"))
    else:
        fs.append(t * t)
    return fs


def courant_data(spec: CourantSpec, require_master: bool = True) -> CourantData:
    """Pairing, bracket table and anchor via derived brackets, with exact axiom residuals.

    Sections tested: the basis e_i, the sums e_i + e_j and the multiples x^a e_i
    (or t e_i without base coordinates).
    """
    if require_master and not check_master_equation(spec).passed:
        raise PreconditionError("master equation {H, H} = 0 fails")
    M = courant_model(spec)
    c = M.chart
    q, m = spec.q, spec.m
    E = [M.section(i) for i in range(1, q + 1)]
    # the residual loops revisit the same arguments many times
    br, pr, an = (lru_cache(maxsize=None)(op) for op in (M.bracket, M.pairing, M.anchor))
    pairing = {(i + 1, j + 1): pr(E[i], E[j]) for i in range(q) for j in range(q)}
    table = {(i + 1, j + 1, k + 1): pr(br(E[i], E[j]), E[k])
             for i in range(q) for j in range(q) for k in range(q)}
    anchor = {}
    for i in range(q):
        anchor[(i + 1, "t")] = an(E[i], c.gen("t"))
        for a in range(1, m + 1):
            anchor[(i + 1, f"x{a}")] = an(E[i], c.gen(f"x{a}"))
    fs = _basic_functions(c, m)
    mult = c.gen("x1") if m else c.gen("t")
    sections = list(E) + [E[i] + E[j] for i in range(q) for j in range(i + 1, q)] + [mult * e for e in E]
    ginv = spec.g_inverse
    tinv = c.gen("t", -1)

    def D(f):
        out = c.zero()
        for i in range(q):
            for k in range(q):
                if ginv[k][i]:
                    out = out + (an(E[k], f) * tinv).scale(ginv[k][i]) * E[i]
        return out

    res = {name: [] for name in ("invariance", "anchor_pairing", "leibniz_right", "polarized_anchor", "anchor_homomorphism", "symmetric_part", "D_definition", "skew_consequence",
                                 "leibniz_left", "homomorphism", "polarized_symmetric")}

    def note(name, v):
        if not v.is_zero():
            res[name].append(v)

    for e in sections:
        for e1 in sections:
            note("invariance", pr(br(e, e1), e1) - pr(e, br(e1, e1)))
            note("anchor_pairing", an(e, pr(e1, e1)) - pr(br(e, e1), e1).scale(2))
            for f in fs:
                note("leibniz_right", br(e, f * e1) - f * br(e, e1) - an(e, f) * e1)
                note("anchor_homomorphism", an(br(e, e1), f) - an(e, an(e1, f)) + an(e1, an(e, f)))
                note("D_definition", pr(D(f), e) - an(e, f))
                for e2 in E:
                    note("leibniz_left", br(f * e1, e2) - f * br(e1, e2) + an(e2, f) * e1 - pr(e1, e2) * D(f))
            for e2 in sections:
                note("polarized_anchor", an(e, pr(e1, e2)) - pr(br(e, e1), e2) - pr(br(e, e2), e1))
                note("symmetric_part", an(e, pr(e1, e2)) - pr(e, br(e1, e2) + br(e2, e1)))
            note("skew_consequence", br(e, e1) + br(e1, e) - D(pr(e, e1)))
    # anchor homomorphism on basis sections, as operators on basic functions
    for i in range(q):
        for j in range(q):
            for f in fs:
                note("homomorphism", an(br(E[i], E[j]), f) - an(E[i], an(E[j], f)) + an(E[j], an(E[i], f)))
    for i, j, k in itertools.product(range(q), repeat=3):
        note("polarized_symmetric", an(E[k], pr(E[i], E[j])) - pr(E[k], br(E[i], E[j]) + br(E[j], E[i])))
    return CourantData(spec, pairing, table, anchor, extract_structure(spec), res)


# Wade bracket ------------------------------------------------------------


@dataclass(frozen=True)
class WadeSection:
    """A section ``(X, f) + (alpha, g)`` over a purely even base chart.

    ``X`` and ``alpha`` are ``((name, coefficient), ...)`` in chart order with
    zero entries dropped; ``f`` and ``g`` are functions.
    """

    chart: Chart
    X: Tuple = ()
    f: SuperPolynomial = None
    alpha: Tuple = ()
    g: SuperPolynomial = None

    def __post_init__(self):
        c = self.chart
        if any(gen.parity for gen in c.generators):
            raise DomainError("Wade sections need a purely even base")

        def clean(pairs):
            d = dict(pairs)
            for n, v in d.items():
                if n not in c:
                    raise DomainError(f"unknown coordinate {n!r}")
                if v.chart != c:
                    raise DomainError("section components must live on the base chart")
            return tuple((n, d[n]) for n in c.names if n in d and not d[n].is_zero())

        object.__setattr__(self, "X", clean(self.X))
        object.__setattr__(self, "alpha", clean(self.alpha))
        for name in ("f", "g"):
            v = getattr(self, name)
            v = c.zero() if v is None else v
            if v.chart != c:
                raise DomainError("section components must live on the base chart")
            object.__setattr__(self, name, v)

    @classmethod
    def make(cls, chart: Chart, X=None, f=None, alpha=None, g=None) -> "WadeSection":
        conv = lambda v: _coerce(v, chart)
        return cls(chart,
                   tuple((n, conv(v)) for n, v in (X or {}).items()),
                   conv(f if f is not None else 0),
                   tuple((n, conv(v)) for n, v in (alpha or {}).items()),
                   conv(g if g is not None else 0))

    def vector(self) -> Dict[str, SuperPolynomial]:
        return dict(self.X)

    def covector(self) -> Dict[str, SuperPolynomial]:
        return dict(self.alpha)

    def __str__(self):
        vec = " + ".join(f"({v})*d/d{n}" for n, v in self.X) or "0"
        cov = " + ".join(f"({v})*d{n}" for n, v in self.alpha) or "0"
        return f"({vec}, {self.f}) + ({cov}, {self.g})"


def _one_form(chart: Chart, fchart: Chart, alpha: Mapping[str, SuperPolynomial]) -> SuperPolynomial:
    out = fchart.zero()
    for n, v in alpha.items():
        out = out + v.to_chart(fchart) * fchart.gen(fchart.velocity_of(n))
    return out


def _lift_field(X: Mapping[str, SuperPolynomial], fchart: Chart):
    return {n: v.to_chart(fchart) for n, v in X.items()}


def wade_bracket(u: WadeSection, v: WadeSection) -> WadeSection:
    """The Loday bracket {(X1,f1)+(a1,g1), (X2,f2)+(a2,g2)} by the explicit Cartan-calculus formula."""
    if u.chart != v.chart:
        raise DomainError("sections live on different base charts")
    c = u.chart
    fc = tangent_lift_chart(c, True)
    X1, X2 = u.vector(), v.vector()
    f1, f2, g1, g2 = u.f, v.f, u.g, v.g
    X = vector_field_bracket(X1, X2, c)
    f = apply_vector_field(X1, f2) - apply_vector_field(X2, f1)
    L1, L2 = _lift_field(X1, fc), _lift_field(X2, fc)
    a1, a2 = _one_form(c, fc, u.covector()), _one_form(c, fc, v.covector())
    lf = lambda h: h.to_chart(fc)
    alpha = (lie_derivative(L1, a2) - contract(L2, exterior_derivative(a1)) + lf(f1) * a2 - lf(f2) * a1
             + lf(f2) * exterior_derivative(lf(g1)) + lf(g2) * exterior_derivative(lf(f1)))
    g = apply_vector_field(X1, g2) - apply_vector_field(X2, g1) + contract(L2, a1).to_chart(c) + f1 * g2
    cov = {n: alpha.derivative(fc.velocity_of(n)).to_chart(c) for n in c.names}
    return WadeSection(c, tuple(X.items()), f, tuple(cov.items()), g)


def wade_pairing(u: WadeSection, v: WadeSection) -> SuperPolynomial:
    """Symmetric pairing with <s, s> = <X, alpha> + f g."""
    if u.chart != v.chart:
        raise DomainError("sections live on different base charts")
    c = u.chart
    out = u.f * v.g + v.f * u.g
    Xu, Xv, au, av = u.vector(), v.vector(), u.covector(), v.covector()
    for n in c.names:
        z = c.zero()
        out = out + Xu.get(n, z) * av.get(n, z) + Xv.get(n, z) * au.get(n, z)
    return out.scale(Fraction(1, 2))


def wade_anchor(u: WadeSection, h: SuperPolynomial) -> SuperPolynomial:
    """rho(u) = X + f, a first-order differential operator."""
    return apply_vector_field(u.vector(), h) + u.f * h


@dataclass(frozen=True)
class WadeModel:
    """T*[2]T[1](R^x x M) with the de Rham cubic Hamiltonian H = td*pt + xd^a*p_a."""

    base: Chart
    carrier: BracketCarrier
    hamiltonian: SuperPolynomial
    signs: Tuple[int, int, int, int] = (1, 1, 1, 1)

    @property
    def chart(self) -> Chart:
        return self.carrier.chart

    def encode(self, s: WadeSection) -> SuperPolynomial:
        """(X,f)+(a,g) -> sX X^a q_a + sf f t q_t + sa t a_a xd^a + sg g td."""
        c = self.chart
        sX, sf, sa, sg = self.signs
        t = c.gen("t")
        out = (s.f.to_chart(c) * t * c.gen("qt")).scale(sf) + (s.g.to_chart(c) * c.gen("td")).scale(sg)
        for n, v in s.X:
            out = out + (v.to_chart(c) * c.gen(f"q{n}")).scale(sX)
        for n, v in s.alpha:
            out = out + (t * v.to_chart(c) * c.gen(f"{n}d")).scale(sa)
        return out

    def decode(self, phi: SuperPolynomial) -> WadeSection:
        c, b = self.chart, self.base
        sX, sf, sa, sg = self.signs
        tinv = c.gen("t", -1)

        def basic(h):
            if h.uses("t") or any(h.uses(n) for n in c.names if n not in b.names):
                raise PreconditionError("function is not a homogeneous section")
            return h.to_chart(b)

        rest = phi
        f = phi.derivative("qt") * tinv
        g = phi.derivative("td")
        rest = rest - (f * c.gen("t") * c.gen("qt")) - g * c.gen("td")
        X, alpha = {}, {}
        for n in b.names:
            X[n] = phi.derivative(f"q{n}")
            alpha[n] = phi.derivative(f"{n}d") * tinv
            rest = rest - X[n] * c.gen(f"q{n}") - c.gen("t") * alpha[n] * c.gen(f"{n}d")
        if not rest.is_zero():
            raise PreconditionError("function is not linear in the fiber coordinates")
        return WadeSection(b,
                           tuple((n, basic(v).scale(sX)) for n, v in X.items()),
                           basic(f).scale(sf),
                           tuple((n, basic(v).scale(sa)) for n, v in alpha.items()),
                           basic(g).scale(sg))

    def bracket(self, u: WadeSection, v: WadeSection) -> WadeSection:
        return self.decode(derived_bracket(self.carrier, self.hamiltonian, self.encode(u), self.encode(v)))

    def pairing(self, u: WadeSection, v: WadeSection) -> SuperPolynomial:
        return canonical_bracket(self.carrier, self.encode(u), self.encode(v))

    def anchor(self, u: WadeSection, h: SuperPolynomial) -> SuperPolynomial:
        """{{phi_u, H}, h} for a basic function h(t, x)."""
        return canonical_bracket(self.carrier,
                                 canonical_bracket(self.carrier, self.encode(u), self.hamiltonian), h)


def wade_chart(base: Chart) -> Chart:
    if any(g.parity for g in base.generators):
        raise DomainError("Wade model needs a purely even base")
    names = base.names
    spec = [("t", 0, (0, 1), True)] + [(n, 0, (0, 0)) for n in names]
    spec += [("td", 1, (1, 1))] + [(f"{n}d", 1, (1, 0)) for n in names]
    spec += [("pt", 0, (2, 0))] + [(f"p{n}", 0, (2, 1)) for n in names]
    spec += [("qt", 1, (1, 0))] + [(f"q{n}", 1, (1, 1)) for n in names]
    pairs = [("t", "pt")] + [(n, f"p{n}") for n in names] + [("td", "qt")] + [(f"{n}d", f"q{n}") for n in names]
    return make_chart(spec, darboux_pairs=pairs)


WADE_SIGNS = (1, 1, 1, 1)


@lru_cache(maxsize=16)
def wade_model(base: Chart, signs: Tuple[int, int, int, int] = None) -> WadeModel:
    c = wade_chart(base)
    b = BracketCarrier.darboux(c)
    H = c.gen("td") * c.gen("pt")
    for n in base.names:
        H = H + c.gen(f"{n}d") * c.gen(f"p{n}")
    return WadeModel(base, b, H, WADE_SIGNS if signs is None else signs)
