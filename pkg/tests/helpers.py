"""Shared constructors for tests: small expression builders over K(t)."""
from fractions import Fraction
import random

from gmdet.kernel import (
    BasePolynomial,
    BaseScalar,
    CurveFunction,
    CurvePolynomial,
    Matrix,
)


def params(k):
    """Return the k parameter scalars a1..ak."""
    return [BaseScalar.param(k, j) for j in range(k)]


def rat(k, q):
    return BaseScalar.from_fraction(k, Fraction(q))


def poly_t(k, *coeffs):
    """Polynomial in t from low to high degree; entries int/Fraction/BaseScalar."""
    cs = [c if isinstance(c, BaseScalar) else rat(k, c) for c in coeffs]
    return CurvePolynomial(k, cs)


def fun(p, q=None):
    if isinstance(p, CurvePolynomial):
        num = p
    else:
        num = CurvePolynomial.const(p)
    den = None
    if q is not None:
        den = q if isinstance(q, CurvePolynomial) else CurvePolynomial.const(q)
    return CurveFunction(num, den)


def random_scalar(rng, k, depth=2, max_terms=3):
    """A random nonzero-ish base scalar as a ratio of small polynomials."""
    num = _random_poly(rng, k, max_terms)
    den = _random_poly(rng, k, max_terms)
    while den.is_zero():
        den = _random_poly(rng, k, max_terms)
    return BaseScalar(num, den)


def _random_poly(rng, k, max_terms):
    p = BasePolynomial.zero(k)
    for _ in range(rng.randint(1, max_terms)):
        e = tuple(rng.randint(0, 2) for _ in range(k))
        c = Fraction(rng.randint(-4, 4))
        p = p + BasePolynomial(k, {e: c})
    return p


def random_nonzero_scalar(rng, k, max_terms=3):
    s = random_scalar(rng, k, max_terms=max_terms)
    while s.is_zero():
        s = random_scalar(rng, k, max_terms=max_terms)
    return s


def const_matrix(k, rows):
    return Matrix([[rat(k, x) if not isinstance(x, BaseScalar) else x for x in row] for row in rows])


def fun_matrix(k, rows):
    out = []
    for row in rows:
        r = []
        for x in row:
            if isinstance(x, CurveFunction):
                r.append(x)
            elif isinstance(x, CurvePolynomial):
                r.append(CurveFunction(x))
            elif isinstance(x, BaseScalar):
                r.append(CurveFunction.const(x))
            else:
                r.append(CurveFunction.from_fraction(k, x))
        out.append(r)
    return Matrix(out)
