"""Exact supercommutative Laurent-polynomial arithmetic.

A :class:`SuperPolynomial` is a sparse map from exponent tuples (one entry per
chart generator) to nonzero :class:`fractions.Fraction` coefficients.  Odd
generators carry exponent 0 or 1 and are always stored in ascending chart
order; the Koszul sign of reordering is absorbed into the coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Iterator, Mapping, Optional, Union

from .errors import ChartMismatchError, DomainError

if TYPE_CHECKING:
    from .charts import Chart

Number = Union[int, Fraction]

ZERO_WEIGHT = "zero"
INHOMOGENEOUS = "inhomogeneous"
MIXED = "mixed"


@dataclass(frozen=True)
class Generator:
    """One graded coordinate: name, parity, integer weight vector."""

    name: str
    parity: int
    weight: tuple = ()
    invertible: bool = False

    def __post_init__(self):
        if self.parity not in (0, 1):
            raise DomainError(f"parity of {self.name!r} must be 0 or 1")
        object.__setattr__(self, "weight", tuple(int(w) for w in self.weight))
        if self.invertible and self.parity == 1:
            raise DomainError(f"odd generator {self.name!r} cannot be invertible")


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


def _mono_product(odd, a, b):
    """Sign and exponent tuple of ``a*b``; ``(0, None)`` when an odd square appears."""
    inversions = 0
    a_after = 0
    for i in reversed(odd):
        if b[i]:
            if a[i]:
                return 0, None
            inversions += a_after
        elif a[i]:
            a_after += 1
    return (-1 if inversions & 1 else 1), tuple(x + y for x, y in zip(a, b))


class SuperPolynomial:
    """Immutable exact element of a supercommutative Laurent-polynomial algebra."""

    __slots__ = ("chart", "_terms", "_hash")

    def __init__(self, chart: "Chart", terms: Optional[Mapping[tuple, Fraction]] = None):
        self.chart = chart
        self._terms = {m: c for m, c in (terms or {}).items() if c != 0}
        self._hash = None

    # construction -----------------------------------------------------

    @classmethod
    def from_terms(cls, chart: "Chart", terms: Mapping[tuple, Number]) -> "SuperPolynomial":
        """Validated construction from raw exponent tuples."""
        n = len(chart.generators)
        out: dict = {}
        for mono, c in terms.items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != n:
                raise DomainError(f"monomial {mono} has wrong length for chart of {n} generators")
            for g, e in zip(chart.generators, mono):
                if e < 0 and not g.invertible:
                    raise DomainError(f"negative exponent on non-invertible generator {g.name!r}")
                if g.parity == 1 and e > 1:
                    mono = None
                    break
            if mono is None:
                continue
            out[mono] = out.get(mono, Fraction(0)) + _as_fraction(c)
        return cls(chart, out)

    @classmethod
    def constant(cls, chart: "Chart", c: Number = 1) -> "SuperPolynomial":
        return cls(chart, {(0,) * len(chart.generators): _as_fraction(c)})

    @classmethod
    def zero(cls, chart: "Chart") -> "SuperPolynomial":
        return cls(chart, {})

    @classmethod
    def generator(cls, chart: "Chart", name: str, power: int = 1) -> "SuperPolynomial":
        k = chart.index(name)
        g = chart.generators[k]
        if power < 0 and not g.invertible:
            raise DomainError(f"negative exponent on non-invertible generator {name!r}")
        if g.parity == 1 and power > 1:
            return cls(chart, {})
        mono = [0] * len(chart.generators)
        mono[k] = power
        return cls(chart, {tuple(mono): Fraction(1)})

    # inspection -------------------------------------------------------

    @property
    def terms(self) -> Mapping[tuple, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator:
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * len(self.chart.generators), Fraction(0))

    def coefficient(self, mono: tuple) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def monomial_parity(self, mono: tuple) -> int:
        return sum(mono[i] for i in self.chart.odd_indices) & 1

    def monomial_weight(self, mono: tuple) -> tuple:
        w = [0] * self.chart.grading_dim
        for g, e in zip(self.chart.generators, mono):
            if e:
                for s, ws in enumerate(g.weight):
                    w[s] += e * ws
        return tuple(w)

    def uses(self, name: str) -> bool:
        k = self.chart.index(name)
        return any(m[k] for m in self._terms)

    def degree_in(self, names: Iterable[str]) -> int:
        """Maximal total degree in the given generators (-1 for zero)."""
        idx = [self.chart.index(n) for n in names]
        return max((sum(m[i] for i in idx) for m in self._terms), default=-1)

    # arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "SuperPolynomial":
        if isinstance(other, SuperPolynomial):
            if other.chart is not self.chart and other.chart != self.chart:
                raise ChartMismatchError("operands live on different charts")
            return other
        if isinstance(other, (int, Fraction)):
            return SuperPolynomial.constant(self.chart, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return SuperPolynomial(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return SuperPolynomial(self.chart, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Number) -> "SuperPolynomial":
        c = _as_fraction(c)
        if c == 0:
            return SuperPolynomial(self.chart, {})
        return SuperPolynomial(self.chart, {m: v * c for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        odd = self.chart.odd_indices
        out: dict = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                sign, m = _mono_product(odd, ma, mb)
                if not sign:
                    continue
                v = out.get(m, 0) + (ca * cb if sign > 0 else -(ca * cb))
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return SuperPolynomial(self.chart, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self.scale(Fraction(1) / _as_fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if len(self._terms) == 1:
                (m, c), = self._terms.items()
                inv = tuple(-e for e in m)
                for g, e in zip(self.chart.generators, inv):
                    if e < 0 and not g.invertible:
                        raise DomainError(f"{g.name!r} is not invertible")
                if any(m[i] for i in self.chart.odd_indices):
                    raise DomainError("odd monomials are not invertible")
                return SuperPolynomial(self.chart, {inv: 1 / c}) ** (-k)
            raise DomainError("only unit monomials can be raised to negative powers")
        result = SuperPolynomial.constant(self.chart, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self._terms
            return self._terms == {(0,) * len(self.chart.generators): Fraction(other)}
        if not isinstance(other, SuperPolynomial):
            return NotImplemented
        return (other.chart is self.chart or other.chart == self.chart) and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart, frozenset(self._terms.items())))
        return self._hash

    # graded calculus --------------------------------------------------

    def derivative(self, name: str) -> "SuperPolynomial":
        """Left graded derivative with respect to ``name``."""
        return partial_derivative(self, name)

    def right_derivative(self, name: str) -> "SuperPolynomial":
        """Right graded derivative: ``f = sum_v (f d<-/dv) v`` on linear pieces."""
        k = self.chart.index(name)
        gen = self.chart.generators[k]
        out: dict = {}
        if gen.parity == 0:
            for m, c in self._terms.items():
                e = m[k]
                if e == 0:
                    continue
                nm = m[:k] + (e - 1,) + m[k + 1:]
                out[nm] = out.get(nm, 0) + c * e
        else:
            after = [i for i in self.chart.odd_indices if i > k]
            for m, c in self._terms.items():
                if not m[k]:
                    continue
                sign = sum(m[i] for i in after) & 1
                nm = m[:k] + (0,) + m[k + 1:]
                out[nm] = out.get(nm, 0) + (-c if sign else c)
        return SuperPolynomial(self.chart, out)

    def parity_part(self, parity: int) -> "SuperPolynomial":
        return SuperPolynomial(
            self.chart, {m: c for m, c in self._terms.items() if self.monomial_parity(m) == parity}
        )

    def parity_components(self):
        return [(p, self.parity_part(p)) for p in (0, 1) if self.parity_part(p)]

    def grade(self):
        return grade(self)

    @property
    def parity(self):
        return grade(self)[0]

    def parity_map(self) -> "SuperPolynomial":
        return parity_map(self)

    def body(self) -> "SuperPolynomial":
        return body(self)

    def rescale(self, factors: Mapping[str, Number]) -> "SuperPolynomial":
        """Multiply each monomial by prod(factor**exponent) (a diagonal algebra automorphism)."""
        idx = [(self.chart.index(n), _as_fraction(v)) for n, v in factors.items()]
        out = {}
        for m, c in self._terms.items():
            for k, v in idx:
                if m[k]:
                    c = c * v ** m[k]
            out[m] = c
        return SuperPolynomial(self.chart, out)

    def to_chart(self, target: "Chart", rename: Optional[Mapping[str, str]] = None) -> "SuperPolynomial":
        """Re-express on ``target`` by generator name, with Koszul sign for odd reordering."""
        rename = rename or {}
        src = self.chart.generators
        mapping = []
        for g in src:
            tname = rename.get(g.name, g.name)
            try:
                k = target.index(tname)
            except KeyError:
                mapping.append(None)
                continue
            if target.generators[k].parity != g.parity:
                raise ChartMismatchError(f"generator {g.name!r} changes parity under embedding")
            mapping.append(k)
        n = len(target.generators)
        out: dict = {}
        for m, c in self._terms.items():
            nm = [0] * n
            odd_targets = []
            for i, e in enumerate(m):
                if not e:
                    continue
                k = mapping[i]
                if k is None:
                    raise ChartMismatchError(f"generator {src[i].name!r} is absent from the target chart")
                nm[k] += e
                if src[i].parity == 1:
                    odd_targets.append(k)
            inv = sum(1 for a in range(len(odd_targets)) for b in range(a + 1, len(odd_targets))
                      if odd_targets[a] > odd_targets[b])
            key = tuple(nm)
            out[key] = out.get(key, 0) + (-c if inv & 1 else c)
        return SuperPolynomial(target, out)

    # presentation -----------------------------------------------------

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda mc: _order_key(mc[0]))

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"SuperPolynomial({format_polynomial(self)!r})"


def _order_key(mono):
    return (sum(mono), tuple(-e for e in mono))


def _format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(chart: "Chart", mono: tuple) -> str:
    parts = []
    for g, e in zip(chart.generators, mono):
        if e == 0:
            continue
        parts.append(g.name if e == 1 else f"{g.name}^{e}")
    return "*".join(parts)


def format_polynomial(f: SuperPolynomial) -> str:
    """Canonical text, e.g. ``-1/2*t^-1*x^2*th1*th2``."""
    if not f._terms:
        return "0"
    pieces = []
    for i, (m, c) in enumerate(f.sorted_terms()):
        mono = format_monomial(f.chart, m)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body_ = _format_coefficient(a)
        elif a == 1:
            body_ = mono
        else:
            body_ = f"{_format_coefficient(a)}*{mono}"
        if i == 0:
            pieces.append(("-" if neg else "") + body_)
        else:
            pieces.append((" - " if neg else " + ") + body_)
    return "".join(pieces)


def _check_same_chart(f: SuperPolynomial, g: SuperPolynomial):
    if f.chart is not g.chart and f.chart != g.chart:
        raise ChartMismatchError("operands live on different charts")


def multiply(f: SuperPolynomial, g: SuperPolynomial) -> SuperPolynomial:
    _check_same_chart(f, g)
    return f * g


def add(f: SuperPolynomial, g: SuperPolynomial) -> SuperPolynomial:
    _check_same_chart(f, g)
    return f + g


def partial_derivative(f: SuperPolynomial, v) -> SuperPolynomial:
    """Left graded derivative.

    For odd ``v`` the sign is (-1)**(number of odd factors to the left of v).
    """
    name = v.name if isinstance(v, Generator) else v
    chart = f.chart
    try:
        k = chart.index(name)
    except KeyError:
        raise ChartMismatchError(f"{name!r} is not a generator of this chart") from None
    if isinstance(v, Generator) and chart.generators[k] != v:
        raise ChartMismatchError(f"generator {name!r} differs from the chart's")
    gen = chart.generators[k]
    out: dict = {}
    if gen.parity == 0:
        for m, c in f._terms.items():
            e = m[k]
            if e == 0:
                continue
            nm = m[:k] + (e - 1,) + m[k + 1:]
            out[nm] = out.get(nm, 0) + c * e
    else:
        before = [i for i in chart.odd_indices if i < k]
        for m, c in f._terms.items():
            if not m[k]:
                continue
            sign = sum(m[i] for i in before) & 1
            nm = m[:k] + (0,) + m[k + 1:]
            out[nm] = out.get(nm, 0) + (-c if sign else c)
    return SuperPolynomial(chart, out)


def grade(f: SuperPolynomial):
    """``(parity, weight)`` shared by all terms.

    parity is 0, 1 or ``"mixed"``; weight is a tuple, ``"zero"`` for the zero
    polynomial or ``"inhomogeneous"``.
    """
    if f.is_zero():
        return 0, ZERO_WEIGHT
    parities = {f.monomial_parity(m) for m in f._terms}
    weights = {f.monomial_weight(m) for m in f._terms}
    parity = parities.pop() if len(parities) == 1 else MIXED
    weight = weights.pop() if len(weights) == 1 else INHOMOGENEOUS
    return parity, weight


def parity_map(f: SuperPolynomial) -> SuperPolynomial:
    return SuperPolynomial(
        f.chart, {m: (-c if f.monomial_parity(m) else c) for m, c in f._terms.items()}
    )


def body(f: SuperPolynomial) -> SuperPolynomial:
    odd = f.chart.odd_indices
    return SuperPolynomial(f.chart, {m: c for m, c in f._terms.items() if not any(m[i] for i in odd)})
