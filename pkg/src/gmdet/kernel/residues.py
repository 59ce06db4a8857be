"""Exact local expansion of rational functions and residue extraction.

Points at infinity are handled by the substitution t = 1/z, dt = -dz/z^2,
inside these routines; no separate chart type leaks outward.
"""
from __future__ import annotations

from typing import List, Optional, Sequence, Union

from ..errors import InputError, InternalError
from .curve import CurveFunction, CurvePolynomial, OneFormFunction
from .forms import BaseOneForm
from .matrices import Matrix
from .scalar import BaseScalar
from .series import LaurentSeries


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()

Point = Union[BaseScalar, _Infinity]


def is_infinity(point: Point) -> bool:
    return point is INFINITY


def point_eq(p: Point, q: Point) -> bool:
    if is_infinity(p) or is_infinity(q):
        return is_infinity(p) and is_infinity(q)
    return p == q


def render_point(p: Point, names=None) -> str:
    return "inf" if is_infinity(p) else p.render(names)


def _poly_in_z(p: CurvePolynomial, point: Point) -> CurvePolynomial:
    """Rewrite p as a polynomial in the local coordinate (times a known z-power at inf)."""
    if is_infinity(point):
        # p(1/z) = z^(-deg) * reversed(p); the caller accounts for the shift
        return p.reversed_coeffs()
    return p.shift(point)


def laurent_expand(f: CurveFunction, point: Point, order: int) -> LaurentSeries:
    """Expand f at the point, exact through z^order.

    At a finite point e the local coordinate is z = t - e; at infinity z = 1/t.
    The valuation of the result is exact.
    """
    if f.den.is_zero():
        raise InputError("cannot expand a function with zero denominator")
    arity = f.arity
    zero = BaseScalar.zero(arity)
    if f.is_zero():
        return LaurentSeries.zero_series(order, zero)
    num = _poly_in_z(f.num, point)
    den = _poly_in_z(f.den, point)
    shift = 0
    if is_infinity(point):
        shift = f.den.degree() - f.num.degree()
    # strip exact zero low-order coefficients
    nv = 0
    while num.coeff(nv).is_zero():
        nv += 1
    dv = 0
    while den.coeff(dv).is_zero():
        dv += 1
    val = shift + nv - dv
    n_terms = order - val + 1
    if n_terms <= 0:
        return LaurentSeries.zero_series(order, zero)
    # series division of the unit parts
    u0 = den.coeff(dv)
    u0_inv = u0.invert()
    inv: List[BaseScalar] = [u0_inv]
    for m in range(1, n_terms):
        acc = BaseScalar.zero(arity)
        for j in range(1, m + 1):
            cj = den.coeff(dv + j)
            if cj.is_zero():
                continue
            acc = acc + cj * inv[m - j]
        inv.append(-(u0_inv * acc))
    coeffs: List[BaseScalar] = []
    for m in range(n_terms):
        acc = BaseScalar.zero(arity)
        for i in range(m + 1):
            ci = num.coeff(nv + i)
            if ci.is_zero():
                continue
            acc = acc + ci * inv[m - i]
        coeffs.append(acc)
    return LaurentSeries(val, coeffs, order, zero)


def expand_form(f: CurveFunction, point: Point, order: int) -> LaurentSeries:
    """Expand the one-form f dt at the point as (series) dz.

    At infinity dt = -dz/z^2 is applied; at finite points dz = dt.
    """
    if is_infinity(point):
        s = laurent_expand(f, point, order + 2)
        return (-s).shift(-2)
    return laurent_expand(f, point, order)


def residue(f: CurveFunction, point: Point) -> BaseScalar:
    """Residue of f dt at the point (coefficient of dz/z in the local chart)."""
    return expand_form(f, point, -1).residue()


def residue_matrix(m: Matrix, point: Point) -> Matrix:
    """Entrywise residue of (matrix of CurveFunction) dt."""
    return m.map(lambda f: residue(f, point))


def residue_oneform(phi: OneFormFunction, point: Point) -> BaseOneForm:
    """Residue of (sum_j g_j(t) da_j) dt: the da coefficients pass through linearly."""
    return BaseOneForm([residue(c, point) for c in phi.comps])


def residue_sum(f: Union[CurveFunction, OneFormFunction], poles: Sequence[BaseScalar]):
    """Sum of residues of f dt over the listed finite poles and infinity.

    For a rational one-form whose finite poles all lie in the list, the
    contract is that the sum vanishes.
    """
    if isinstance(f, OneFormFunction):
        total = residue_oneform(f, INFINITY)
        for e in poles:
            total = total + residue_oneform(f, e)
        return total
    total = residue(f, INFINITY)
    for e in poles:
        total = total + residue(f, e)
    return total


def pole_order(f: CurveFunction, point: Point) -> int:
    """Order of the pole of the one-form f dt at the point (0 if regular)."""
    if f.is_zero():
        return 0
    s = expand_form(f, point, 1)
    try:
        v = s.valuation()
    except Exception:
        return 0
    return max(0, -v)


def expand_matrix_function(m: Matrix, point: Point, order: int) -> LaurentSeries:
    """Expand a matrix of CurveFunctions as a series of BaseScalar matrices."""
    entries = [[laurent_expand(f, point, order) for f in row] for row in m.data]
    return _assemble(entries, m.rows, m.cols, order)


def expand_matrix_form(m: Matrix, point: Point, order: int) -> LaurentSeries:
    """Expand (matrix of CurveFunction) dt as (series of matrices) dz."""
    entries = [[expand_form(f, point, order) for f in row] for row in m.data]
    return _assemble(entries, m.rows, m.cols, order)


def _assemble(entries, rows: int, cols: int, order: int) -> LaurentSeries:
    arity = entries[0][0].zero.arity
    zmat = Matrix.filled(rows, cols, BaseScalar.zero(arity))
    vals = [s.val for row in entries for s in row if s.coeffs]
    if not vals:
        return LaurentSeries.zero_series(order, zmat)
    val = min(vals)
    coeffs = []
    for n in range(val, order + 1):
        coeffs.append(Matrix([[entries[i][j].coeff(n) for j in range(cols)] for i in range(rows)]))
    return LaurentSeries(val, coeffs, order, zmat)
