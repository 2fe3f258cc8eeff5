"""Textual polynomials and the ``.gcm`` structure-file format.

Polynomial grammar (whitespace is ignored)::

    expr    := ["+" | "-"] term (("+" | "-") term)*
    term    := factor (("*" | "/") factor)*        # "/" only by a constant
    factor  := "-" factor | atom ["^" ["-"] INT]
    atom    := INT | NAME | "(" expr ")"
    NAME    := [A-Za-z_][A-Za-z0-9_]*

Negative exponents are allowed only on invertible generators (and on
monomials made of them).  :func:`format_polynomial` prints in this grammar, so
printing and parsing round-trip.

Structure files are line oriented; ``#`` starts a comment.  A file holds a
mandatory ``chart`` block and optional ``oneform``, ``jacobi``, ``courant``,
``hamiltonian`` and ``wade`` blocks, each closed by ``end``::

    chart
      x even 0            # name parity weight... [invertible]
      th odd 0
    end
    oneform
      x: 1                # coefficient of dx
      th: th
    end
    jacobi odd            # even | odd; polynomials on the lift with momenta d_<x>
      Lambda: th*d_x^2
      Gamma: th*d_x
      f: th
    end
    courant               # base chart must be x1..xm (even)
      q: 2
      g: 0 1; 1 0         # rows separated by ';'
      r 1 1: 1            # r_i^a
      r0 1: 0             # r_i
      A 1 2 3: 1          # A_ijk for i<j<k
    end
    hamiltonian
      lift reversed       # reversed (Pi T*, Schouten) | plain (T*); momenta d_<x>
      H: d_x*d_y
      F: x
      G: y
    end
    wade                  # sections (X, f) + (alpha, g) on the purely even chart
      u.X x1: 1
      u.f: 0
      u.alpha x1: 0
      u.g: 0
      v.alpha x1: x1
    end
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebra import SuperPolynomial, format_polynomial
from .charts import Chart, cotangent_lift_chart, make_chart
from .errors import DomainError, ParseError, SuperAlgebraError

# error codes
E_SYNTAX = "E100"
E_UNKNOWN_NAME = "E201"
E_NONCONSTANT_DIVISION = "E202"
E_BAD_POWER = "E203"
E_CHART = "E204"
E_BLOCK = "E205"

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str, line: int, col0: int):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        col = m.start(m.lastindex) + col0 + 1
        if m.group(1) is not None:
            out.append(("int", m.group(1), col))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), col))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", line, col)
            out.append((ch, ch, col))
        pos = m.end()
    out.append(("eof", "", len(text.rstrip()) + col0 + 1))
    return out


class _Parser:
    def __init__(self, text: str, chart: Chart, line: int, col0: int):
        self.chart = chart
        self.line = line
        self.toks = _tokenize(text, line, col0)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {kind}, found {what}", self.line, tok[2])
        self.i += 1
        return tok

    def error(self, msg, tok=None, kind="syntax", code=None):
        tok = tok or self.peek()
        return ParseError(msg, self.line, tok[2], kind, code)

    def parse(self) -> SuperPolynomial:
        if self.peek()[0] == "eof":
            raise self.error("empty polynomial")
        out = self.expr()
        if self.peek()[0] != "eof":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return out

    def expr(self):
        sign = 1
        if self.peek()[0] in "+-" and self.peek()[0] != "eof":
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term().scale(sign)
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.take()
            rhs_tok = self.peek()
            rhs = self.factor()
            if op[0] == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise self.error("division only by a nonzero constant", rhs_tok, "semantic", E_NONCONSTANT_DIVISION)
                acc = acc.scale(1 / rhs.constant_term())
        return acc

    def factor(self):
        if self.peek()[0] == "-":
            self.take()
            return -self.factor()
        tok = self.peek()
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            neg = False
            if self.peek()[0] == "-":
                self.take()
                neg = True
            exp_tok = self.peek()
            if exp_tok[0] != "int":
                raise self.error("exponent must be an integer", exp_tok)
            self.take()
            k = -int(exp_tok[1]) if neg else int(exp_tok[1])
            try:
                return base ** k
            except (DomainError, ValueError) as exc:
                raise self.error(str(exc), tok, "semantic", E_BAD_POWER) from None
        return base

    def atom(self):
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            return self.chart.const(int(tok[1]))
        if tok[0] == "name":
            self.take()
            if tok[1] not in self.chart:
                raise self.error(f"undeclared generator {tok[1]!r}", tok, "semantic", E_UNKNOWN_NAME)
            return self.chart.gen(tok[1])
        if tok[0] == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        what = "end of input" if tok[0] == "eof" else repr(tok[1])
        raise self.error(f"expected a number, generator or '(', found {what}")


def parse_polynomial(text: str, chart: Chart, line: int = 1, column_offset: int = 0) -> SuperPolynomial:
    """Parse ``text`` on ``chart``; errors carry 1-based line/column."""
    return _Parser(text, chart, line, column_offset).parse()


# structure files ----------------------------------------------------------


@dataclass(frozen=True)
class JacobiBlock:
    parity: int
    Lambda: SuperPolynomial
    Gamma: SuperPolynomial
    f: SuperPolynomial


@dataclass(frozen=True)
class HamiltonianBlock:
    reversed_momenta: bool    # True: Pi T* (Schouten); False: T*
    H: SuperPolynomial
    F: Optional[SuperPolynomial] = None
    G: Optional[SuperPolynomial] = None

    @property
    def chart(self) -> Chart:
        return self.H.chart


@dataclass(frozen=True)
class WadeSection:
    X: Tuple = ()        # ((name, coeff), ...) on the base chart
    f: Optional[SuperPolynomial] = None
    alpha: Tuple = ()
    g: Optional[SuperPolynomial] = None


@dataclass(frozen=True)
class StructureFile:
    chart: Chart
    oneform: Optional[object] = None          # contact.OneForm
    jacobi: Optional[object] = None           # jacobi.JacobiTriple
    courant: Optional[object] = None          # courant.CourantSpec
    hamiltonian: Optional[HamiltonianBlock] = None
    wade: Optional[Tuple[WadeSection, WadeSection]] = None


_BLOCKS = ("chart", "oneform", "jacobi", "courant", "hamiltonian", "wade")


def _strip(raw: str) -> str:
    return raw.split("#", 1)[0].rstrip()


def _split_key(body: str, line: int, col0: int):
    """Split ``key: value`` returning (key, value, column offset of value)."""
    if ":" not in body:
        raise ParseError("expected 'key: value'", line, col0 + 1)
    k, v = body.split(":", 1)
    return k.strip(), v, col0 + len(k) + 1


def parse_structure(text: str) -> StructureFile:
    """Parse a ``.gcm`` document."""
    blocks: List[Tuple[str, List[str], int, List[Tuple[int, int, str]]]] = []
    current = None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line.strip():
            continue
        col0 = len(line) - len(line.lstrip())
        body = line.strip()
        words = body.split()
        if current is None:
            if words[0] not in _BLOCKS:
                raise ParseError(f"unknown block {words[0]!r}", n, col0 + 1)
            if any(b[0] == words[0] for b in blocks):
                raise ParseError(f"duplicate block {words[0]!r}", n, col0 + 1, "semantic", E_BLOCK)
            current = (words[0], words[1:], n, [])
        elif body == "end":
            blocks.append(current)
            current = None
        else:
            current[3].append((n, col0, body))
    if current is not None:
        raise ParseError(f"block {current[0]!r} is not closed by 'end'", current[2], 1)
    named = {b[0]: b for b in blocks}
    if "chart" not in named:
        raise ParseError("missing chart block", 1, 1, "semantic", E_BLOCK)
    chart = _parse_chart(named["chart"])
    sf = {"chart": chart}
    if "oneform" in named:
        sf["oneform"] = _parse_oneform(named["oneform"], chart)
    if "jacobi" in named:
        sf["jacobi"] = _parse_jacobi(named["jacobi"], chart)
    if "courant" in named:
        sf["courant"] = _parse_courant(named["courant"], chart)
    if "hamiltonian" in named:
        sf["hamiltonian"] = _parse_hamiltonian(named["hamiltonian"], chart)
    if "wade" in named:
        sf["wade"] = _parse_wade(named["wade"], chart)
    return StructureFile(**sf)


def _no_args(block):
    name, args, n, _ = block
    if args:
        raise ParseError(f"block {name!r} takes no arguments", n, 1)


def _parse_chart(block) -> Chart:
    _no_args(block)
    spec = []
    dims = set()
    for n, col0, body in block[3]:
        words = body.split()
        if len(words) < 2:
            raise ParseError("generator line needs 'name parity [weight...] [invertible]'", n, col0 + 1)
        name, parity = words[0], words[1]
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise ParseError(f"invalid generator name {name!r}", n, col0 + 1)
        if parity not in ("even", "odd"):
            raise ParseError(f"parity must be 'even' or 'odd', found {parity!r}", n, col0 + len(name) + 2)
        rest = words[2:]
        inv = False
        if rest and rest[-1] == "invertible":
            inv = True
            rest = rest[:-1]
        try:
            weight = tuple(int(w) for w in rest)
        except ValueError:
            raise ParseError("weights must be integers", n, col0 + 1) from None
        dims.add(len(weight))
        spec.append((name, 0 if parity == "even" else 1, weight, inv))
    if len(dims) > 1:
        raise ParseError("all generators need weight vectors of the same length", block[2], 1, "semantic", E_CHART)
    try:
        return make_chart(spec)
    except SuperAlgebraError as exc:
        raise ParseError(str(exc), block[2], 1, "semantic", E_CHART) from None


def _poly(value: str, chart: Chart, n: int, col: int) -> SuperPolynomial:
    return parse_polynomial(value, chart, n, col)


def _parse_oneform(block, chart):
    from .contact import OneForm

    _no_args(block)
    coeffs = {}
    for n, col0, body in block[3]:
        key, value, vcol = _split_key(body, n, col0)
        if key not in chart:
            raise ParseError(f"undeclared generator {key!r}", n, col0 + 1, "semantic", E_UNKNOWN_NAME)
        if key in coeffs:
            raise ParseError(f"duplicate coefficient for d{key}", n, col0 + 1, "semantic", E_BLOCK)
        coeffs[key] = _poly(value, chart, n, vcol)
    try:
        return OneForm.from_mapping(chart, coeffs)
    except SuperAlgebraError as exc:
        raise ParseError(str(exc), block[2], 1, "semantic", E_BLOCK) from None


def _parse_jacobi(block, chart):
    from .jacobi import JacobiTriple, shifted_cotangent_chart

    name, args, n0, lines = block
    if args not in (["even"], ["odd"]):
        raise ParseError("jacobi block needs parity 'even' or 'odd'", n0, 1)
    parity = 0 if args[0] == "even" else 1
    lifted = shifted_cotangent_chart(chart, parity)
    vals = {"Lambda": lifted.zero(), "Gamma": lifted.zero(), "f": lifted.zero()}
    for n, col0, body in lines:
        key, value, vcol = _split_key(body, n, col0)
        if key not in vals:
            raise ParseError(f"unknown jacobi entry {key!r}", n, col0 + 1)
        vals[key] = _poly(value, lifted, n, vcol)
    try:
        return JacobiTriple(chart, parity, vals["Lambda"], vals["Gamma"], vals["f"])
    except SuperAlgebraError as exc:
        raise ParseError(str(exc), n0, 1, "semantic", E_BLOCK) from None


def _parse_courant(block, chart):
    from .courant import CourantSpec, base_chart

    _no_args(block)
    m = len(chart.generators)
    if chart != base_chart(m):
        raise ParseError("courant base chart must be 'x1 even' ... 'xm even'", block[2], 1, "semantic", E_CHART)
    q = None
    g = None
    rc: Dict[Tuple[int, int], SuperPolynomial] = {}
    rs: Dict[int, SuperPolynomial] = {}
    A = []
    for n, col0, body in block[3]:
        key, value, vcol = _split_key(body, n, col0)
        words = key.split()
        try:
            idx = tuple(int(w) for w in words[1:])
        except ValueError:
            raise ParseError("indices must be integers", n, col0 + 1) from None
        if words[0] == "q" and not idx:
            try:
                q = int(value)
            except ValueError:
                raise ParseError("q must be an integer", n, vcol + 1) from None
        elif words[0] == "g" and not idx:
            try:
                g = tuple(tuple(Fraction(v) for v in row.split()) for row in value.split(";"))
            except ValueError:
                raise ParseError("g rows must be rationals", n, vcol + 1) from None
        elif words[0] == "r" and len(idx) == 2:
            rc[idx] = _poly(value, chart, n, vcol)
        elif words[0] == "r0" and len(idx) == 1:
            rs[idx[0]] = _poly(value, chart, n, vcol)
        elif words[0] == "A" and len(idx) == 3:
            A.append((idx, _poly(value, chart, n, vcol)))
        else:
            raise ParseError(f"unknown courant entry {key!r}", n, col0 + 1)
    if q is None or g is None:
        raise ParseError("courant block needs 'q' and 'g'", block[2], 1, "semantic", E_BLOCK)
    for (i, a) in rc:
        if not (1 <= i <= q and 1 <= a <= m):
            raise ParseError(f"r index ({i}, {a}) out of range", block[2], 1, "semantic", E_BLOCK)
    for i in rs:
        if not 1 <= i <= q:
            raise ParseError(f"r0 index {i} out of range", block[2], 1, "semantic", E_BLOCK)
    zero = chart.zero()
    r_coef = tuple(tuple(rc.get((i, a), zero) for a in range(1, m + 1)) for i in range(1, q + 1))
    r_scalar = tuple(rs.get(i, zero) for i in range(1, q + 1))
    try:
        return CourantSpec(m, q, g, r_coef, r_scalar, tuple(A))
    except SuperAlgebraError as exc:
        raise ParseError(str(exc), block[2], 1, "semantic", E_BLOCK) from None


def hamiltonian_lift(chart: Chart, reversed_momenta: bool) -> Chart:
    """Cotangent lift with momenta ``d_<x>``; ``reversed_momenta`` gives Pi T* (Schouten bracket)."""
    return cotangent_lift_chart(chart, 1, reverse_momentum_parity=reversed_momenta, prefix="d_")


def _parse_hamiltonian(block, chart):
    _no_args(block)
    lift = None
    vals = {}
    lines = block[3]
    for n, col0, body in lines:
        words = body.split()
        if words[0] == "lift":
            if len(words) != 2 or words[1] not in ("plain", "reversed"):
                raise ParseError("expected 'lift plain' or 'lift reversed'", n, col0 + 1)
            lift = words[1] == "reversed"
    if lift is None:
        raise ParseError("hamiltonian block needs a 'lift' line", block[2], 1, "semantic", E_BLOCK)
    lifted = hamiltonian_lift(chart, lift)
    for n, col0, body in lines:
        if body.split()[0] == "lift":
            continue
        key, value, vcol = _split_key(body, n, col0)
        if key not in ("H", "F", "G"):
            raise ParseError(f"unknown hamiltonian entry {key!r}", n, col0 + 1)
        vals[key] = _poly(value, lifted, n, vcol)
    if "H" not in vals:
        raise ParseError("hamiltonian block needs 'H'", block[2], 1, "semantic", E_BLOCK)
    return HamiltonianBlock(lift, vals["H"], vals.get("F"), vals.get("G"))


def _parse_wade(block, chart):
    _no_args(block)
    if any(g.parity for g in chart.generators):
        raise ParseError("wade sections need a purely even chart", block[2], 1, "semantic", E_CHART)
    data = {s: {"X": {}, "f": chart.zero(), "alpha": {}, "g": chart.zero()} for s in ("u", "v")}
    for n, col0, body in block[3]:
        key, value, vcol = _split_key(body, n, col0)
        words = key.split()
        sec, _, comp = words[0].partition(".")
        if sec not in data or comp not in data[sec]:
            raise ParseError(f"unknown wade entry {key!r}", n, col0 + 1)
        p = _poly(value, chart, n, vcol)
        if comp in ("X", "alpha"):
            if len(words) != 2 or words[1] not in chart:
                raise ParseError(f"{comp} entries need a declared coordinate", n, col0 + 1, "semantic", E_UNKNOWN_NAME)
            data[sec][comp][words[1]] = p
        else:
            if len(words) != 1:
                raise ParseError(f"{comp} takes no index", n, col0 + 1)
            data[sec][comp] = p
    names = chart.names

    def sec(d):
        comp = lambda m: tuple((x, m[x]) for x in names if x in m and not m[x].is_zero())
        return WadeSection(comp(d["X"]), d["f"], comp(d["alpha"]), d["g"])

    return (sec(data["u"]), sec(data["v"]))


def format_structure(sf: StructureFile) -> str:
    """Canonical text of a structure file; ``parse_structure`` inverts it."""
    out = ["chart"]
    for g in sf.chart.generators:
        parts = [g.name, "odd" if g.parity else "even"] + [str(w) for w in g.weight]
        if g.invertible:
            parts.append("invertible")
        out.append("  " + " ".join(parts))
    out.append("end")
    if sf.oneform is not None:
        out.append("oneform")
        for name, c in sf.oneform.coefficients:
            if not c.is_zero():
                out.append(f"  {name}: {format_polynomial(c)}")
        out.append("end")
    if sf.jacobi is not None:
        j = sf.jacobi
        out.append(f"jacobi {'odd' if j.parity else 'even'}")
        out.append(f"  Lambda: {format_polynomial(j.Lambda)}")
        out.append(f"  Gamma: {format_polynomial(j.Gamma)}")
        out.append(f"  f: {format_polynomial(j.f)}")
        out.append("end")
    if sf.courant is not None:
        s = sf.courant
        out.append("courant")
        out.append(f"  q: {s.q}")
        out.append("  g: " + "; ".join(" ".join(str(v) for v in row) for row in s.g))
        for i in range(s.q):
            for a in range(s.m):
                if not s.r_coef[i][a].is_zero():
                    out.append(f"  r {i + 1} {a + 1}: {format_polynomial(s.r_coef[i][a])}")
        for i in range(s.q):
            if not s.r_scalar[i].is_zero():
                out.append(f"  r0 {i + 1}: {format_polynomial(s.r_scalar[i])}")
        for (i, j, k), v in s.A:
            out.append(f"  A {i} {j} {k}: {format_polynomial(v)}")
        out.append("end")
    if sf.hamiltonian is not None:
        h = sf.hamiltonian
        out.append("hamiltonian")
        out.append(f"  lift {'reversed' if h.reversed_momenta else 'plain'}")
        out.append(f"  H: {format_polynomial(h.H)}")
        for key in ("F", "G"):
            v = getattr(h, key)
            if v is not None:
                out.append(f"  {key}: {format_polynomial(v)}")
        out.append("end")
    if sf.wade is not None:
        out.append("wade")
        for label, s in zip(("u", "v"), sf.wade):
            for x, c in s.X:
                out.append(f"  {label}.X {x}: {format_polynomial(c)}")
            if s.f is not None and not s.f.is_zero():
                out.append(f"  {label}.f: {format_polynomial(s.f)}")
            for x, c in s.alpha:
                out.append(f"  {label}.alpha {x}: {format_polynomial(c)}")
            if s.g is not None and not s.g.is_zero():
                out.append(f"  {label}.g: {format_polynomial(s.g)}")
        out.append("end")
    return "\n".join(out) + "\n"


def read_structure(path: str) -> StructureFile:
    with open(path, encoding="utf-8") as fh:
        return parse_structure(fh.read())
