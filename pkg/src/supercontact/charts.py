"""Graded coordinate charts and their lifts.

Every lift prepends one new grading component; generators that were already
present get weight 0 there, so the original weight data survives verbatim in
the trailing components.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .algebra import Generator, SuperPolynomial
from .errors import DomainError, DuplicateNameError, PreconditionError


def _parse_parity(p) -> int:
    if p in (0, 1):
        return int(p)
    if isinstance(p, str):
        key = p.strip().lower()
        if key in ("even", "0"):
            return 0
        if key in ("odd", "1"):
            return 1
    raise DomainError(f"unrecognised parity {p!r}")


@dataclass(frozen=True)
class Chart:
    """Ordered list of generators with optional Darboux and tangent metadata.

    ``darboux_pairs`` holds ``(base, momentum)`` name pairs, ``tangent_pairs``
    holds ``(base, velocity)`` name pairs for charts built by
    :func:`tangent_lift_chart`.
    """

    generators: tuple
    grading_dim: int = 0
    darboux_pairs: tuple = ()
    distinguished_t: Optional[str] = None
    tangent_pairs: tuple = ()
    _index: dict = field(default=None, compare=False, hash=False, repr=False)
    _odd: tuple = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        index = {}
        for i, g in enumerate(gens):
            if not isinstance(g, Generator):
                raise DomainError("chart entries must be Generator instances")
            if g.name in index:
                raise DuplicateNameError(f"duplicate generator name {g.name!r}")
            if len(g.weight) != self.grading_dim:
                raise DomainError(
                    f"generator {g.name!r} has weight length {len(g.weight)}, expected {self.grading_dim}"
                )
            index[g.name] = i
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_odd", tuple(i for i, g in enumerate(gens) if g.parity == 1))
        object.__setattr__(self, "darboux_pairs", tuple(tuple(p) for p in self.darboux_pairs))
        object.__setattr__(self, "tangent_pairs", tuple(tuple(p) for p in self.tangent_pairs))
        seen = set()
        for base, mom in self.darboux_pairs:
            for n in (base, mom):
                if n not in index:
                    raise DomainError(f"darboux pair references unknown generator {n!r}")
                if n in seen:
                    raise DomainError(f"generator {n!r} appears in two darboux pairs")
                seen.add(n)
        parities = {(gens[index[b]].parity + gens[index[m]].parity) % 2 for b, m in self.darboux_pairs}
        if len(parities) > 1:
            raise DomainError("darboux pairs mix parity-preserving and parity-reversing lifts")
        for base, vel in self.tangent_pairs:
            if base not in index or vel not in index:
                raise DomainError("tangent pair references unknown generator")
        if self.distinguished_t is not None:
            if self.distinguished_t not in index:
                raise DomainError("distinguished t is not a generator")
            g = gens[index[self.distinguished_t]]
            if not g.invertible or g.parity != 0:
                raise DomainError("distinguished t must be even and invertible")

    # lookup -------------------------------------------------------------

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(name) from None

    def __contains__(self, name) -> bool:
        return name in self._index

    def __getitem__(self, name: str) -> Generator:
        return self.generators[self.index(name)]

    @property
    def names(self) -> tuple:
        return tuple(g.name for g in self.generators)

    @property
    def odd_indices(self) -> tuple:
        return self._odd

    def parity_of(self, name: str) -> int:
        return self[name].parity

    def momentum_of(self, base: str) -> Optional[str]:
        for b, m in self.darboux_pairs:
            if b == base:
                return m
        return None

    def base_of(self, momentum: str) -> Optional[str]:
        for b, m in self.darboux_pairs:
            if m == momentum:
                return b
        return None

    def velocity_of(self, base: str) -> Optional[str]:
        for b, v in self.tangent_pairs:
            if b == base:
                return v
        return None

    @property
    def base_names(self) -> tuple:
        return tuple(b for b, _ in self.darboux_pairs)

    @property
    def momentum_names(self) -> tuple:
        return tuple(m for _, m in self.darboux_pairs)

    @property
    def bracket_parity(self) -> int:
        """0 for a plain cotangent lift, 1 for a parity-reversed one."""
        if not self.darboux_pairs:
            raise PreconditionError("chart has no darboux pairs")
        b, m = self.darboux_pairs[0]
        return (self[b].parity + self[m].parity) % 2

    # polynomial constructors -------------------------------------------

    def gen(self, name: str, power: int = 1) -> SuperPolynomial:
        return SuperPolynomial.generator(self, name, power)

    def const(self, c=1) -> SuperPolynomial:
        return SuperPolynomial.constant(self, c)

    def zero(self) -> SuperPolynomial:
        return SuperPolynomial.zero(self)

    def gens(self, *names: str):
        return tuple(self.gen(n) for n in names)

    def parse(self, text: str) -> SuperPolynomial:
        from .textio import parse_polynomial

        return parse_polynomial(text, self)

    def __repr__(self):
        body = ", ".join(
            f"{g.name}:{'odd' if g.parity else 'even'}{list(g.weight)}{'*' if g.invertible else ''}"
            for g in self.generators
        )
        return f"Chart({body})"


def make_chart(spec: Iterable, grading_dim: Optional[int] = None, darboux_pairs: Sequence = (),
               distinguished_t: Optional[str] = None) -> Chart:
    """Build a chart from generator descriptions.

    Each entry is a :class:`Generator`, a mapping with keys
    ``name/parity/weight/invertible``, or a tuple ``(name, parity[, weight[, invertible]])``.
    """
    gens = []
    for item in spec:
        if isinstance(item, Generator):
            gens.append(item)
            continue
        if isinstance(item, Mapping):
            name = item["name"]
            parity = item.get("parity", 0)
            weight = item.get("weight", ())
            inv = item.get("invertible", False)
        else:
            item = tuple(item)
            name, parity = item[0], item[1]
            weight = item[2] if len(item) > 2 else ()
            inv = item[3] if len(item) > 3 else False
        if isinstance(weight, int):
            weight = (weight,)
        gens.append(Generator(name, _parse_parity(parity), tuple(weight), bool(inv)))
    dims = {len(g.weight) for g in gens}
    if grading_dim is None:
        if len(dims) > 1:
            raise DomainError("inconsistent weight vector lengths")
        grading_dim = dims.pop() if dims else 0
    elif dims - {grading_dim}:
        raise DomainError("inconsistent weight vector lengths")
    return Chart(tuple(gens), grading_dim, tuple(darboux_pairs), distinguished_t)


def _prepend(g: Generator, lead: int) -> Generator:
    return Generator(g.name, g.parity, (lead,) + g.weight, g.invertible)


def _fresh(name: str, taken: set) -> str:
    if name in taken:
        raise DuplicateNameError(f"lifted generator name {name!r} collides with an existing one")
    taken.add(name)
    return name


def cotangent_lift_chart(c: Chart, r: int = 1, reverse_momentum_parity: bool = False,
                         prefix: Optional[str] = None, names: Optional[Mapping[str, str]] = None) -> Chart:
    """(Π)T*[r] lift: momentum of ``x`` (weight ``w``) gets weight ``(r, r - w)``.

    Momenta default to ``p_<name>`` (plain lift) or ``xi_<name>`` (reversed).
    """
    if r < 0:
        raise DomainError("phase-lift degree r must be non-negative")
    if prefix is None:
        prefix = "xi_" if reverse_momentum_parity else "p_"
    names = dict(names or {})
    taken = set(c.names)
    base = [_prepend(g, 0) for g in c.generators]
    momenta, pairs = [], []
    for g in c.generators:
        mname = _fresh(names.get(g.name, prefix + g.name), taken)
        w = (r,) + tuple(r - wi for wi in g.weight)
        momenta.append(Generator(mname, (g.parity + int(reverse_momentum_parity)) % 2, w, False))
        pairs.append((g.name, mname))
    return Chart(tuple(base + momenta), c.grading_dim + 1, tuple(pairs), c.distinguished_t)


def tangent_lift_chart(c: Chart, reverse_fiber_parity: bool = True, prefix: str = "d",
                       names: Optional[Mapping[str, str]] = None) -> Chart:
    """(Π)T lift: velocity of ``x`` (weight ``w``) gets weight ``(1, w)``.

    With ``reverse_fiber_parity`` polynomials in the velocities are
    differential forms.
    """
    names = dict(names or {})
    taken = set(c.names)
    base = [_prepend(g, 0) for g in c.generators]
    vel, pairs = [], []
    for g in c.generators:
        vname = _fresh(names.get(g.name, prefix + g.name), taken)
        vel.append(Generator(vname, (g.parity + int(reverse_fiber_parity)) % 2, (1,) + g.weight, False))
        pairs.append((g.name, vname))
    return Chart(tuple(base + vel), c.grading_dim + 1, (), c.distinguished_t, tuple(pairs))


def extend_with_fiber(c: Chart, name: str = "t") -> Chart:
    """Adjoin the invertible even fiber coordinate ``t`` of R^x x M, placed first."""
    if c.distinguished_t is not None:
        raise PreconditionError("chart already carries a distinguished fiber coordinate")
    if name in c:
        raise DuplicateNameError(f"generator {name!r} already exists")
    t = Generator(name, 0, (1,) + (0,) * c.grading_dim, True)
    gens = (t,) + tuple(_prepend(g, 0) for g in c.generators)
    return Chart(gens, c.grading_dim + 1, c.darboux_pairs, name, c.tangent_pairs)


def base_chart_of(c: Chart) -> Chart:
    """Sub-chart of the base generators of a cotangent lift (drops momenta and the leading component)."""
    if not c.darboux_pairs:
        raise PreconditionError("chart has no darboux pairs")
    gens = tuple(Generator(g.name, g.parity, g.weight[1:], g.invertible)
                 for g in c.generators if g.name in set(c.base_names))
    return Chart(gens, c.grading_dim - 1, (), c.distinguished_t if c.distinguished_t in c.base_names else None)
