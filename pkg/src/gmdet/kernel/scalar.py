"""Elements of the base field K = Q(a1..ak) as quotients of BasePolynomials.

Equality is decided by cross-multiplication, never by reduction to a canonical
form.  A best-effort simplification (rational content extraction plus a
recursive-univariate GCD) runs only when the representation grows past a
configurable threshold, so correctness never depends on multivariate GCD.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from ..errors import InputError, InternalError
from .poly import BasePolynomial, poly_divexact, poly_divexact_or_none, poly_gcd

# Term-count threshold past which a GCD cancellation is attempted.
SIMPLIFY_THRESHOLD = 40


class BaseScalar:
    __slots__ = ("num", "den")

    def __init__(self, num: BasePolynomial, den: Optional[BasePolynomial] = None):
        if den is None:
            den = BasePolynomial.one(num.arity)
        if den.is_zero():
            raise InputError("zero denominator in base scalar")
        if num.arity != den.arity:
            raise InternalError("mixed parameter arities")
        if num.is_zero():
            den = BasePolynomial.one(num.arity)
        elif den.is_constant():
            c = den.constant_value()
            if c != 1:
                num = num.scale(1 / c)
                den = BasePolynomial.one(num.arity)
        elif num.terms == den.terms:
            num = BasePolynomial.one(num.arity)
            den = BasePolynomial.one(num.arity)
        else:
            # keep the denominator primitive with positive leading coefficient
            c = den.content()
            if c != 1:
                den = den.scale(1 / c)
                num = num.scale(1 / c)
            if num.size() + den.size() > SIMPLIFY_THRESHOLD:
                g = poly_gcd(num, den)
                if not (g.is_constant()):
                    num = poly_divexact(num, g)
                    den = poly_divexact(den, g)
                    c = den.content()
                    if c != 1:
                        den = den.scale(1 / c)
                        num = num.scale(1 / c)
        self.num = num
        self.den = den

    # ---- constructors --------------------------------------------------
    @classmethod
    def from_fraction(cls, arity: int, q) -> "BaseScalar":
        return cls(BasePolynomial.constant(arity, Fraction(q)))

    @classmethod
    def zero(cls, arity: int) -> "BaseScalar":
        return cls(BasePolynomial.zero(arity))

    @classmethod
    def one(cls, arity: int) -> "BaseScalar":
        return cls(BasePolynomial.one(arity))

    @classmethod
    def param(cls, arity: int, j: int) -> "BaseScalar":
        return cls(BasePolynomial.variable(arity, j))

    # ---- predicates ------------------------------------------------------
    @property
    def arity(self) -> int:
        return self.num.arity

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == self.den

    def is_rational(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise InternalError("scalar is not a rational constant")
        return self.num.constant_value() / self.den.constant_value()

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("BaseScalar is unhashable (equality is by cross-multiplication)")

    # ---- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, BaseScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return BaseScalar.from_fraction(self.arity, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return BaseScalar(self.num + other.num, self.den)
        return BaseScalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return BaseScalar(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return BaseScalar.zero(self.arity)
        # cheap cross cancellations keep sizes down without full GCD
        a_num, a_den = self.num, self.den
        b_num, b_den = other.num, other.den
        if a_num.terms == b_den.terms:
            a_num, b_den = BasePolynomial.one(self.arity), BasePolynomial.one(self.arity)
        if b_num.terms == a_den.terms:
            b_num, a_den = BasePolynomial.one(self.arity), BasePolynomial.one(self.arity)
        return BaseScalar(a_num * b_num, a_den * b_den)

    __rmul__ = __mul__

    def invert(self) -> "BaseScalar":
        if self.is_zero():
            raise InputError("division by zero base scalar")
        return BaseScalar(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return other * self.invert()

    def __pow__(self, n: int) -> "BaseScalar":
        if n < 0:
            return self.invert() ** (-n)
        r = BaseScalar.one(self.arity)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    # ---- calculus ----------------------------------------------------------
    def partial(self, j: int) -> "BaseScalar":
        """d/da_j by the quotient rule, stripping denominator factors cheaply."""
        n, d = self.num, self.den
        if d.is_constant():
            return BaseScalar(n.partial(j), d)
        num = n.partial(j) * d - n * d.partial(j)
        # nested quotients make num divisible by d; strip before squaring
        q = poly_divexact_or_none(num, d)
        if q is not None:
            return BaseScalar(q, d)
        return BaseScalar(num, d * d)

    def subs_param(self, j: int, value: Fraction) -> "BaseScalar":
        den = self.den.subs_param(j, value)
        if den.is_zero():
            raise InputError(f"specialization a{j+1}={value} hits a pole of a coefficient")
        return BaseScalar(self.num.subs_param(j, value), den)

    def simplified(self) -> "BaseScalar":
        """Force a GCD cancellation attempt regardless of size."""
        g = poly_gcd(self.num, self.den)
        if g.is_constant():
            return self
        return BaseScalar(poly_divexact(self.num, g), poly_divexact(self.den, g))

    def size(self) -> int:
        return self.num.size() + self.den.size()

    # ---- rendering -----------------------------------------------------------
    def render(self, names: Optional[Sequence[str]] = None) -> str:
        ns = self.num.render(names)
        if self.den.is_constant():
            return ns
        ds = self.den.render(names)
        if self.num.size() > 1:
            ns = f"({ns})"
        return f"{ns}/({ds})"

    def __repr__(self):
        return f"BaseScalar({self.render()})"
