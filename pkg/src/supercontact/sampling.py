"""Seeded random polynomials for the randomized property checks."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import SuperPolynomial
from .charts import Chart


def monomials_up_to(chart: Chart, max_degree: int, names: Optional[Sequence[str]] = None):
    """All exponent tuples of total degree <= max_degree in ``names`` (odd exponents 0/1)."""
    names = list(names if names is not None else chart.names)
    idx = [chart.index(n) for n in names]
    n = len(chart.generators)
    out = []

    def rec(pos, remaining, current):
        if pos == len(idx):
            mono = [0] * n
            for i, e in zip(idx, current):
                mono[i] = e
            out.append(tuple(mono))
            return
        g = chart.generators[idx[pos]]
        top = min(remaining, 1) if g.parity else remaining
        for e in range(top + 1):
            rec(pos + 1, remaining - e, current + [e])

    rec(0, max_degree, [])
    out.sort(key=lambda m: (sum(m), tuple(-e for e in m)))
    return out


def random_polynomial(chart: Chart, rng: random.Random, max_degree: int = 2, parity: Optional[int] = None,
                      names: Optional[Sequence[str]] = None, max_terms: int = 4, coeff_range: int = 3
                      ) -> SuperPolynomial:
    """Sparse random polynomial with small rational coefficients.

    With ``parity`` given the result is parity-homogeneous (possibly zero only
    when no monomial of that parity exists).
    """
    monos = monomials_up_to(chart, max_degree, names)
    if parity is not None:
        odd = chart.odd_indices
        monos = [m for m in monos if sum(m[i] for i in odd) % 2 == parity]
    if not monos:
        return SuperPolynomial.zero(chart)
    k = rng.randint(1, max(1, min(max_terms, len(monos))))
    terms = {}
    for m in rng.sample(monos, k):
        c = 0
        while c == 0:
            c = rng.randint(-coeff_range, coeff_range)
        den = rng.choice((1, 1, 1, 2, 3))
        terms[m] = Fraction(c, den)
    return SuperPolynomial.from_terms(chart, terms)
