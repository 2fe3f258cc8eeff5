"""Truncated cochain complexes of a homological Hamiltonian and their cohomology.

The differential is ``d = {J, .}`` restricted to a graded selection of
monomials.  Spaces are spanned by monomials whose degree in the
non-invertible even generators is at most the truncation; Laurent exponents
of invertible generators are bounded by the truncation plus one.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .algebra import SuperPolynomial
from .brackets import BracketCarrier, canonical_bracket, is_homological
from .charts import Chart, make_chart
from .errors import ClosureError, PreconditionError
from .forms import exterior_derivative, form_chart
from .linalg import is_zero_matrix, matmul_rational, rank
from .sampling import random_polynomial


@dataclass(frozen=True)
class GradedComplex:
    """Finite-dimensional cochain complex.

    ``bases[d]`` lists the exponent tuples spanning degree ``d``; ``matrices[d]``
    is the matrix of ``C^d -> C^{d+1}`` with rows indexed by ``bases[d+1]`` and
    columns by ``bases[d]``.
    """

    degrees: Tuple[int, ...]
    bases: Dict[int, Tuple[tuple, ...]]
    matrices: Dict[int, List[List[Fraction]]]
    chart: Optional[Chart] = None

    def dim(self, d: int) -> int:
        return len(self.bases.get(d, ()))

    @classmethod
    def from_matrices(cls, dims: Sequence[int], matrices: Dict[int, List[List[Fraction]]]) -> "GradedComplex":
        """Abstract complex with basis labels 0..dim-1 in each degree."""
        degrees = tuple(range(len(dims)))
        bases = {d: tuple((i,) for i in range(n)) for d, n in zip(degrees, dims)}
        mats = {}
        for d in degrees[:-1]:
            m = matrices.get(d)
            mats[d] = [list(r) for r in m] if m is not None else [[Fraction(0)] * dims[d] for _ in range(dims[d + 1])]
        return cls(degrees, bases, mats)


def check_complex(c: GradedComplex) -> bool:
    """Consecutive differentials compose to zero, exactly."""
    for d in c.degrees:
        if d + 1 not in c.matrices or d not in c.matrices:
            continue
        a, b = c.matrices[d + 1], c.matrices[d]
        if not a or not b or not b[0]:
            continue
        if not is_zero_matrix(matmul_rational(a, b)):
            return False
    return True


@dataclass(frozen=True)
class CohomologyRow:
    degree: int
    dim: int
    rank: int
    cohomology: int


def cohomology_table(c: GradedComplex) -> List[CohomologyRow]:
    ranks = {}
    for d in c.degrees:
        m = c.matrices.get(d)
        ranks[d] = rank(m, c.dim(d)) if m and c.dim(d) else 0
    rows = []
    for d in c.degrees:
        kernel = c.dim(d) - ranks[d]
        image = ranks.get(d - 1, 0)
        rows.append(CohomologyRow(d, c.dim(d), ranks[d], kernel - image))
    return rows


def cohomology_dims(c: GradedComplex) -> List[int]:
    """dim ker d_d - rank d_{d-1} per degree (exact rational ranks)."""
    return [r.cohomology for r in cohomology_table(c)]


def truncated_monomials(chart: Chart, truncation: int) -> List[tuple]:
    """Exponent tuples with non-invertible even degree <= truncation and
    invertible exponents in [-truncation-1, truncation+1]."""
    ranges = []
    for g in chart.generators:
        if g.parity:
            ranges.append(range(2))
        elif g.invertible:
            ranges.append(range(-truncation - 1, truncation + 2))
        else:
            ranges.append(range(truncation + 1))
    even_idx = [i for i, g in enumerate(chart.generators) if g.parity == 0 and not g.invertible]
    out = [m for m in itertools.product(*ranges) if sum(m[i] for i in even_idx) <= truncation]
    out.sort(key=lambda m: (sum(abs(e) for e in m), tuple(-e for e in m)))
    return out


def differential_from_hamiltonian(b: BracketCarrier, J: SuperPolynomial,
                                  selector: Callable[[tuple], bool],
                                  degree_of: Callable[[tuple], int],
                                  truncation: int = 3) -> GradedComplex:
    """Matrices of ``{J, .}`` on the monomials picked by ``selector`` (a weight predicate).

    ``degree_of`` maps a weight vector to the cochain degree.  Images of
    monomials are required to stay in the selected (truncated) span.
    """
    if not is_homological(b, J):
        raise PreconditionError("J is not homological: {J, J} != 0")
    chart = b.chart
    zero = SuperPolynomial.zero(chart)
    bases: Dict[int, List[tuple]] = {}
    for m in truncated_monomials(chart, truncation):
        w = zero.monomial_weight(m)
        if selector(w):
            bases.setdefault(degree_of(w), []).append(m)
    if not bases:
        return GradedComplex((), {}, {}, chart)
    lo, hi = min(bases), max(bases)
    degrees = tuple(range(lo, hi + 1))
    index = {d: {m: i for i, m in enumerate(bases.get(d, []))} for d in degrees}
    matrices = {}
    for d in degrees:
        src = bases.get(d, [])
        tgt = index.get(d + 1, {})
        mat = [[Fraction(0)] * len(src) for _ in range(len(tgt))]
        for col, m in enumerate(src):
            image = canonical_bracket(b, J, SuperPolynomial.from_terms(chart, {m: 1}))
            for mono, coeff in image.items():
                if mono not in tgt:
                    w = zero.monomial_weight(mono)
                    if selector(w) and degree_of(w) == d + 1:
                        raise ClosureError(f"image leaves the truncation at degree {d + 1}")
                    raise ClosureError("selected subspace is not closed under d")
                mat[tgt[mono]][col] += coeff
        if d + 1 in index:
            matrices[d] = mat
    return GradedComplex(degrees, {d: tuple(bases.get(d, [])) for d in degrees}, matrices, chart)


# the principal-bundle example -------------------------------------------------


def kirillov_chart(m: int) -> Chart:
    """Shifted cotangent chart of T*[1](R^x x R^m) style bookkeeping.

    Base ``t, x_a, z, p_a`` (even) with odd momenta ``zd`` (of t), ``pd_a``
    (of x_a), ``td`` (of z), ``xd_a`` (of p_a).  Weights are
    ``(cochain degree, R^x degree, vector-bundle degree)``.
    """
    xs = [f"x{a}" for a in range(1, m + 1)]
    spec = [("t", 0, (0, 1, 0), True)] + [(x, 0, (0, 0, 0)) for x in xs]
    spec += [("z", 0, (0, 0, 1))] + [(f"p{a}", 0, (0, 1, 1)) for a in range(1, m + 1)]
    spec += [("zd", 1, (1, 0, 1))] + [(f"pd{a}", 1, (1, 1, 1)) for a in range(1, m + 1)]
    spec += [("td", 1, (1, 1, 0))] + [(f"xd{a}", 1, (1, 0, 0)) for a in range(1, m + 1)]
    pairs = [("t", "zd")] + [(f"x{a}", f"pd{a}") for a in range(1, m + 1)]
    pairs += [("z", "td")] + [(f"p{a}", f"xd{a}") for a in range(1, m + 1)]
    return make_chart(spec, darboux_pairs=pairs)


def kirillov_hamiltonian(m: int) -> Tuple[BracketCarrier, SuperPolynomial]:
    """J = td*zd + xd_a*pd_a, whose differential on functions of (t, x, td, xd) is td d_t + xd_a d_x_a."""
    c = kirillov_chart(m)
    b = BracketCarrier.darboux(c)
    J = c.gen("td") * c.gen("zd")
    for a in range(1, m + 1):
        J = J + c.gen(f"xd{a}") * c.gen(f"pd{a}")
    return b, J


def kirillov_complex(m: int, truncation: int = 3) -> GradedComplex:
    """The complex on R^x-degree 1, vector-bundle degree 0 functions."""
    b, J = kirillov_hamiltonian(m)
    return differential_from_hamiltonian(b, J, lambda w: w[1] == 1 and w[2] == 0, lambda w: w[0], truncation)


# twisted de Rham operator ----------------------------------------------------


def de_rham_chart(m: int) -> Chart:
    """Forms on R^m: coordinates x1..xm with odd differentials dx1..dxm."""
    return form_chart(make_chart([(f"x{a}", 0) for a in range(1, m + 1)]))


def twisted_de_rham_operator(m: int):
    """The operator (mu, nu) -> (d mu, mu - d nu), i.e. d + Phi wedge on mu + Phi nu.

    Returns a function on pairs of form-polynomials on :func:`de_rham_chart` ``(m)``.
    """
    c = de_rham_chart(m)

    def op(mu: SuperPolynomial, nu: SuperPolynomial):
        if mu.chart != c or nu.chart != c:
            raise PreconditionError("forms must live on the de Rham chart")
        return exterior_derivative(mu), mu - exterior_derivative(nu)

    return op


def twisted_matrix_matches(m: int, max_degree: int = 2) -> Tuple[bool, List[str]]:
    """Compare the twisted de Rham operator with {J, .} through (mu, nu) -> t mu + td nu.

    Every pair of monomials (mu, 0), (0, nu) with polynomial degree <= max_degree
    is mapped, and the two images are compared term by term.
    """
    b, J = kirillov_hamiltonian(m)
    kc = b.chart
    dr = de_rham_chart(m)
    op = twisted_de_rham_operator(m)
    rename = {f"dx{a}": f"xd{a}" for a in range(1, m + 1)}
    t, td = kc.gen("t"), kc.gen("td")

    def iso(mu, nu):
        return t * mu.to_chart(kc, rename) + td * nu.to_chart(kc, rename)

    mismatches = []
    zero = dr.zero()
    monos = [SuperPolynomial.from_terms(dr, {mo: 1}) for mo in _monomials(dr, max_degree)]
    for mono in monos:
        for pair in ((mono, zero), (zero, mono)):
            lhs = canonical_bracket(b, J, iso(*pair))
            rhs = iso(*op(*pair))
            if lhs != rhs:
                mismatches.append(f"mu={pair[0]}, nu={pair[1]}: {{J,.}} gives {lhs}, twisted gives {rhs}")
    return not mismatches, mismatches


def _monomials(c: Chart, max_degree: int):
    from .sampling import monomials_up_to

    return monomials_up_to(c, max_degree)


def twisted_square_vanishes(m: int, samples: int = 20, seed: int = 0, max_degree: int = 3) -> bool:
    op = twisted_de_rham_operator(m)
    c = de_rham_chart(m)
    rng = random.Random(seed)
    for _ in range(samples):
        mu = random_polynomial(c, rng, max_degree)
        nu = random_polynomial(c, rng, max_degree)
        a, b = op(*op(mu, nu))
        if not (a.is_zero() and b.is_zero()):
            return False
    return True
