"""Exact linear algebra over the rationals and over super-rings.

Matrices are lists of rows.  Entries are :class:`fractions.Fraction` for the
rational routines and :class:`SuperPolynomial` for the super-ring routines.
The determinant and inverse of the body matrix are delegated to sympy's
``DomainMatrix``; the nilpotent correction is a finite Neumann series.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from .algebra import SuperPolynomial
from .errors import DomainError

Matrix = List[List[SuperPolynomial]]


# rational matrices -------------------------------------------------------


def _to_integer_rows(rows: Sequence[Sequence[Fraction]]):
    out = []
    for row in rows:
        den = 1
        for v in row:
            den = den * Fraction(v).denominator // _gcd(den, Fraction(v).denominator)
        out.append([int(Fraction(v) * den) for v in row])
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def rank(rows: Sequence[Sequence[Fraction]], ncols: Optional[int] = None) -> int:
    """Exact rank by fraction-free row reduction over the integers."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0]) if ncols is None else ncols
    if ncols == 0:
        return 0
    ints = _to_integer_rows(rows)
    dm = DomainMatrix([[ZZ(v) for v in r] for r in ints], (len(ints), ncols), ZZ)
    _, _, pivots = dm.rref_den()
    return len(pivots)


def matmul_rational(a, b):
    n, m = len(a), len(b[0]) if b else 0
    inner = len(b)
    return [[sum((a[i][k] * b[k][j] for k in range(inner)), Fraction(0)) for j in range(m)] for i in range(n)]


def is_zero_matrix(rows) -> bool:
    return all(v == 0 for r in rows for v in r)


# super-ring matrices ------------------------------------------------------


def identity(chart, n: int) -> Matrix:
    one, zero = SuperPolynomial.constant(chart, 1), SuperPolynomial.zero(chart)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    inner = len(b)
    m = len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for k in range(inner):
                if a[i][k].is_zero() or b[k][j].is_zero():
                    continue
                term = a[i][k] * b[k][j]
                acc = term if acc is None else acc + term
            row.append(acc if acc is not None else SuperPolynomial.zero(a[0][0].chart))
        out.append(row)
    return out


def matadd(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matscale(a: Matrix, c) -> Matrix:
    return [[x.scale(c) for x in r] for r in a]


def matneg(a: Matrix) -> Matrix:
    return [[-x for x in r] for r in a]


def matrix_is_zero(a: Matrix) -> bool:
    return all(x.is_zero() for r in a for x in r)


def body_inverse(b: Matrix):
    """Inverse of a square matrix with entries in the even, odd-free part of the ring.

    Returns ``(inverse, determinant)``; ``inverse`` is ``None`` when the
    determinant is not a nonzero rational times a monomial in invertible
    generators.
    """
    n = len(b)
    if any(len(r) != n for r in b):
        raise DomainError("matrix is not square")
    if n == 0:
        return [], None
    chart = b[0][0].chart
    gens = chart.generators
    used = sorted({i for r in b for x in r for m, _ in x.items() for i, e in enumerate(m) if e})
    for i in used:
        if gens[i].parity:
            raise DomainError("body matrix contains odd generators")
    shift = [0] * len(gens)
    for r in b:
        for x in r:
            for m, _ in x.items():
                for i in used:
                    if m[i] < 0:
                        shift[i] = max(shift[i], -m[i])
    if used:
        dom = QQ[tuple(gens[i].name for i in used)]
        ring = dom.ring

        def conv(x):
            d = {}
            for m, c in x.items():
                d[tuple(m[i] + shift[i] for i in used)] = QQ(c.numerator, c.denominator)
            return ring.from_dict(d) if d else ring.zero
    else:
        dom = QQ

        def conv(x):
            c = x.constant_term()
            return QQ(c.numerator, c.denominator)

    dm = DomainMatrix([[conv(x) for x in r] for r in b], (n, n), dom)
    det = dm.det()
    if used:
        det_terms = det.to_dict()
    else:
        det_terms = {(): det}
    if len(det_terms) != 1:
        return None, det
    (dmono, dcoef), = det_terms.items()
    if dcoef == 0:
        return None, det
    for i, e in zip(used, dmono):
        if e and not gens[i].invertible:
            return None, det
    inv = dm.to_field().inv()
    # b' = T b with T = prod t^shift, so inverse(b) = T inverse(b');
    # since det(b') is a unit monomial, each entry is numerator / monomial.
    n_gens = len(gens)
    inv_rows = []
    for r in inv.to_list():
        row = []
        for v in r:
            if used:
                num, den = v.numer.to_dict(), v.denom.to_dict()
            else:
                num, den = ({(): v} if v != 0 else {}), {(): QQ(1)}
            if len(den) != 1:
                raise DomainError("body inverse has a non-monomial denominator")
            (dm_mono, dm_coef), = den.items()
            dc = Fraction(int(dm_coef.numerator), int(dm_coef.denominator))
            terms = {}
            for mono, c in num.items():
                full = [0] * n_gens
                for i, e, de in zip(used, mono, dm_mono):
                    full[i] = e - de + shift[i]
                terms[tuple(full)] = Fraction(int(c.numerator), int(c.denominator)) / dc
            row.append(SuperPolynomial.from_terms(chart, terms))
        inv_rows.append(row)
    return inv_rows, det


def invert_supermatrix(m: Matrix) -> Optional[Matrix]:
    """Two-sided inverse over the super-ring, or ``None`` when the body is not invertible.

    With ``m = B + N`` (``B`` the body, ``N`` nilpotent) the inverse is
    ``sum_k (-B^{-1} N)^k B^{-1}``; the series stops once a power vanishes.
    """
    n = len(m)
    if n == 0:
        return []
    bmat = [[x.body() for x in r] for r in m]
    binv, _ = body_inverse(bmat)
    if binv is None:
        return None
    nil = [[x - y for x, y in zip(rm, rb)] for rm, rb in zip(m, bmat)]
    step = matneg(matmul(binv, nil))
    total = binv
    power = binv
    odd_count = len(m[0][0].chart.odd_indices)
    for _ in range(odd_count + 1):
        power = matmul(step, power)
        if matrix_is_zero(power):
            break
        total = matadd(total, power)
    else:
        raise DomainError("Neumann series failed to terminate")
    return total
