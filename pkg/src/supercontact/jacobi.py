"""Jacobi structures (Lambda, Gamma, f), poissonization and the Jacobi bracket.

A triple lives on the shifted cotangent chart of the base: odd momenta
(multivector fields, Schouten bracket) for an even structure, even momenta
(symmetric Schouten bracket) for an odd one.  Momentum names are ``d_<x>``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional

from .algebra import SuperPolynomial
from .brackets import BracketCarrier, canonical_bracket, derived_bracket, is_homological
from .charts import Chart, cotangent_lift_chart, extend_with_fiber
from .errors import ChartMismatchError, InternalConsistencyError, InvalidTripleError
from .sampling import random_polynomial

MOMENTUM_PREFIX = "d_"


def shifted_cotangent_chart(base: Chart, parity: int) -> Chart:
    """Pi T* for even structures, T* for odd ones."""
    return cotangent_lift_chart(base, 1, reverse_momentum_parity=(parity == 0), prefix=MOMENTUM_PREFIX)


@dataclass(frozen=True)
class JacobiTriple:
    base: Chart
    parity: int
    Lambda: SuperPolynomial
    Gamma: SuperPolynomial
    f: SuperPolynomial
    lifted: Chart = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.parity not in (0, 1):
            raise InvalidTripleError("parity must be 0 (even) or 1 (odd)")
        lifted = shifted_cotangent_chart(self.base, self.parity)
        object.__setattr__(self, "lifted", lifted)
        moms = lifted.momentum_names
        for label, poly, deg in (("Lambda", self.Lambda, 2), ("Gamma", self.Gamma, 1), ("f", self.f, 0)):
            if poly.chart != lifted:
                raise ChartMismatchError(f"{label} must live on the shifted cotangent chart")
            if poly.is_zero():
                continue
            for m, _ in poly.items():
                d = sum(m[lifted.index(n)] for n in moms)
                if d != deg:
                    raise InvalidTripleError(f"{label} must be homogeneous of fiber degree {deg}")
            # an even structure has even tensors; as polynomials on Pi T* their
            # parity is shifted by the fiber degree
            want = (self.parity + (deg if self.parity == 0 else 0)) % 2
            if poly.parity != want:
                raise InvalidTripleError(f"{label} has the wrong parity for a {'odd' if self.parity else 'even'} structure")
        if self.parity == 0 and not self.f.is_zero():
            raise InvalidTripleError("an even Jacobi structure has f = 0")

    @classmethod
    def from_text(cls, base: Chart, parity: int, Lambda: str, Gamma: str = "0", f: str = "0") -> "JacobiTriple":
        lifted = shifted_cotangent_chart(base, parity)
        return cls(base, parity, lifted.parse(Lambda), lifted.parse(Gamma), lifted.parse(f))

    @property
    def carrier(self) -> BracketCarrier:
        return BracketCarrier.darboux(self.lifted)


@dataclass(frozen=True)
class JacobiReport:
    passed: bool
    residuals: Dict[str, SuperPolynomial]


def check_jacobi(j: JacobiTriple) -> JacobiReport:
    """Residuals of the Jacobi conditions written with the (symmetric) Schouten bracket."""
    b = j.carrier
    br = lambda u, v: canonical_bracket(b, u, v)
    L, G, f = j.Lambda, j.Gamma, j.f
    res = {}
    res["[L,L]-2GL"] = br(L, L) - (G * L).scale(2)
    if j.parity == 0:
        res["[G,L]"] = br(G, L)
    else:
        res["[G,L]-2fL"] = br(G, L) - (f * L).scale(2)
        res["[G,G]-2(fG-[f,L])"] = br(G, G) - (f * G - br(f, L)).scale(2)
        res["G(f)"] = br(G, f)
    return JacobiReport(all(r.is_zero() for r in res.values()), res)


@dataclass(frozen=True)
class Poissonization:
    triple: JacobiTriple
    chart: Chart          # shifted cotangent chart of R^x x M
    carrier: BracketCarrier
    hamiltonian: SuperPolynomial
    t: str = "t"


@lru_cache(maxsize=64)
def poissonization(j: JacobiTriple, t_name: str = "t") -> Poissonization:
    ext = extend_with_fiber(j.base, t_name)
    lifted = shifted_cotangent_chart(ext, j.parity)
    t = lifted.gen(t_name)
    pt = lifted.gen(lifted.momentum_of(t_name))
    J = lifted.gen(t_name, -1) * j.Lambda.to_chart(lifted) + j.Gamma.to_chart(lifted) * pt
    if j.parity == 1:
        J = J + t * j.f.to_chart(lifted) * pt * pt
    return Poissonization(j, lifted, BracketCarrier.darboux(lifted), J, t_name)


def poissonize(j: JacobiTriple) -> SuperPolynomial:
    """J = t^-1 Lambda + Gamma d_t + t f d_t^2 (the last term vanishes identically when d_t is odd)."""
    return poissonization(j).hamiltonian


def jacobi_bracket(j: JacobiTriple, F: SuperPolynomial, G: SuperPolynomial) -> SuperPolynomial:
    """{F, G} defined by {tF, tG}_J = t {F, G}."""
    for h in (F, G):
        if h.chart != j.base:
            raise ChartMismatchError("Jacobi bracket arguments must be functions on the base chart")
    P = poissonization(j)
    ch = P.chart
    t = ch.gen(P.t)
    r = derived_bracket(P.carrier, P.hamiltonian, t * F.to_chart(ch), t * G.to_chart(ch)) * ch.gen(P.t, -1)
    if r.uses(P.t) or any(r.uses(m) for m in ch.momentum_names):
        raise InternalConsistencyError("Jacobi bracket is not a basic function")
    return r.to_chart(j.base)


def poissonization_is_homological(j: JacobiTriple) -> bool:
    P = poissonization(j)
    return is_homological(P.carrier, P.hamiltonian)


@dataclass(frozen=True)
class AxiomReport:
    passed: bool
    samples: int
    failures: Dict[str, int]
    first_failure: Optional[str] = None


def check_bracket_axioms(bracket, chart: Chart, k: int, samples: int = 100, seed: int = 0,
                         max_degree: int = 2) -> AxiomReport:
    """Randomized exact check of the parity rule, antisymmetry, Jacobi and generalized Leibniz rules."""
    rng = random.Random(seed)
    failures = {"parity": 0, "antisymmetry": 0, "jacobi": 0, "leibniz": 0}
    first = None
    one = chart.const(1)
    for n in range(samples):
        gs = [rng.randint(0, 1) for _ in range(3)]
        F, G, E = (random_polynomial(chart, rng, max_degree, parity=g) for g in gs)
        gf, gg, ge = gs
        FG = bracket(F, G)
        checks = {}
        checks["parity"] = FG.is_zero() or FG.parity == (gf + gg + k) % 2
        s = -1 if ((gf + k) * (gg + k)) % 2 == 0 else 1
        checks["antisymmetry"] = FG == bracket(G, F).scale(s)
        sj = 1 if ((gf + k) * (gg + k)) % 2 else -1
        checks["jacobi"] = bracket(FG, E) == bracket(F, bracket(G, E)) + bracket(G, bracket(F, E)).scale(sj)
        sl = -1 if ((gf + k) * gg) % 2 else 1
        checks["leibniz"] = bracket(F, G * E) == bracket(F, G) * E + (G * bracket(F, E)).scale(sl) - bracket(F, one) * G * E
        for name, ok in checks.items():
            if not ok:
                failures[name] += 1
                if first is None:
                    first = f"sample {n}: {name} fails for F={F}, G={G}, E={E}"
    return AxiomReport(not any(failures.values()), samples, failures, first)


def verify_jacobi_axioms(j: JacobiTriple, samples: int = 100, seed: int = 0, max_degree: int = 2) -> AxiomReport:
    return check_bracket_axioms(lambda u, v: jacobi_bracket(j, u, v), j.base, j.parity, samples, seed, max_degree)
