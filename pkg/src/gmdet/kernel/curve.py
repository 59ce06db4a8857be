"""Polynomials and rational functions in the curve coordinate t over K."""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..errors import InputError, InternalError
from .forms import BaseOneForm
from .scalar import BaseScalar


class CurvePolynomial:
    """Dense polynomial in t with BaseScalar coefficients (index = degree)."""

    __slots__ = ("arity", "coeffs")

    def __init__(self, arity: int, coeffs: Sequence[BaseScalar]):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.arity = arity
        self.coeffs: Tuple[BaseScalar, ...] = tuple(cs)
        if any(c.arity != arity for c in self.coeffs):
            raise InternalError("mixed parameter arities in curve polynomial")

    # ---- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, arity: int) -> "CurvePolynomial":
        return cls(arity, [])

    @classmethod
    def const(cls, c: BaseScalar) -> "CurvePolynomial":
        return cls(c.arity, [c])

    @classmethod
    def from_fraction(cls, arity: int, q) -> "CurvePolynomial":
        return cls(arity, [BaseScalar.from_fraction(arity, q)])

    @classmethod
    def t(cls, arity: int) -> "CurvePolynomial":
        return cls(arity, [BaseScalar.zero(arity), BaseScalar.one(arity)])

    # ---- predicates --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> BaseScalar:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return BaseScalar.zero(self.arity)

    def lead(self) -> BaseScalar:
        if self.is_zero():
            raise InternalError("leading coefficient of zero polynomial")
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CurvePolynomial):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    # ---- arithmetic -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, CurvePolynomial):
            return other
        if isinstance(other, BaseScalar):
            return CurvePolynomial.const(other)
        if isinstance(other, (int, Fraction)):
            return CurvePolynomial.from_fraction(self.arity, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return CurvePolynomial(self.arity, [self.coeff(i) + other.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return CurvePolynomial(self.arity, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, BaseScalar)):
            c = other if isinstance(other, BaseScalar) else BaseScalar.from_fraction(self.arity, other)
            return CurvePolynomial(self.arity, [a * c for a in self.coeffs])
        if not isinstance(other, CurvePolynomial):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return CurvePolynomial.zero(self.arity)
        out = [BaseScalar.zero(self.arity) for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return CurvePolynomial(self.arity, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "CurvePolynomial":
        if n < 0:
            raise InternalError("negative power of curve polynomial")
        r = CurvePolynomial.from_fraction(self.arity, 1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def divmod(self, other: "CurvePolynomial") -> Tuple["CurvePolynomial", "CurvePolynomial"]:
        if other.is_zero():
            raise InputError("polynomial division by zero")
        q: List[BaseScalar] = []
        rem = list(self.coeffs)
        d = other.degree()
        lead_inv = other.lead().invert()
        while len(rem) - 1 >= d and rem:
            k = len(rem) - 1 - d
            c = rem[-1] * lead_inv
            while len(q) < k + 1:
                q.insert(0, BaseScalar.zero(self.arity))
            q[k] = c
            for i in range(d + 1):
                rem[k + i] = rem[k + i] - c * other.coeff(i)
            while rem and rem[-1].is_zero():
                rem.pop()
        return CurvePolynomial(self.arity, q), CurvePolynomial(self.arity, rem)

    # ---- calculus ----------------------------------------------------------
    def derivative(self) -> "CurvePolynomial":
        return CurvePolynomial(self.arity, [self.coeffs[i] * i for i in range(1, len(self.coeffs))])

    def d_base(self) -> List["CurvePolynomial"]:
        """Coefficientwise parameter differentials: one polynomial per da_j."""
        return [
            CurvePolynomial(self.arity, [c.partial(j) for c in self.coeffs])
            for j in range(self.arity)
        ]

    def eval(self, x: BaseScalar) -> BaseScalar:
        acc = BaseScalar.zero(self.arity)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, e: BaseScalar) -> "CurvePolynomial":
        """p(t+e) as a polynomial in t, by Horner composition."""
        acc = CurvePolynomial.zero(self.arity)
        te = CurvePolynomial(self.arity, [e, BaseScalar.one(self.arity)])
        for c in reversed(self.coeffs):
            acc = acc * te + CurvePolynomial.const(c)
        return acc

    def reversed_coeffs(self) -> "CurvePolynomial":
        """t^deg * p(1/t); constant term becomes the old leading coefficient."""
        return CurvePolynomial(self.arity, list(reversed(self.coeffs)))

    def monic(self) -> "CurvePolynomial":
        if self.is_zero():
            return self
        li = self.lead().invert()
        return CurvePolynomial(self.arity, [c * li for c in self.coeffs])

    def subs_param(self, j: int, value: Fraction) -> "CurvePolynomial":
        return CurvePolynomial(self.arity, [c.subs_param(j, value) for c in self.coeffs])

    # ---- rendering -------------------------------------------------------------
    def render(self, names: Optional[Sequence[str]] = None, var: str = "t") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            cs = c.render(names)
            if mono:
                if cs == "1":
                    body = mono
                elif cs == "-1":
                    body = f"-{mono}"
                else:
                    body = f"({cs})*{mono}"
            else:
                body = cs if c.num.size() <= 1 else f"({cs})"
            if parts and not body.startswith("-"):
                parts.append("+" + body)
            else:
                parts.append(body)
        return "".join(parts)

    def __repr__(self):
        return f"CurvePolynomial({self.render()})"


def curve_gcd(p: CurvePolynomial, q: CurvePolynomial) -> CurvePolynomial:
    """Monic GCD in K[t] by the Euclidean algorithm."""
    a, b = p, q
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r
    return a.monic() if not a.is_zero() else a


def squarefree_decomposition(h: CurvePolynomial) -> List[Tuple[CurvePolynomial, int]]:
    """Yun's algorithm: h = prod q_i^i with q_i squarefree, pairwise coprime."""
    if h.is_zero():
        raise InputError("squarefree decomposition of zero polynomial")
    out: List[Tuple[CurvePolynomial, int]] = []
    g = curve_gcd(h, h.derivative())
    if g.degree() <= 0:
        return [(h.monic(), 1)]
    w, _ = h.monic().divmod(g)
    y, _ = h.monic().derivative().divmod(g)
    # correct for monic normalization: recompute y from w
    y = y * h.lead().invert() * h.lead()
    z = y - w.derivative()
    i = 1
    while not w.is_zero() and w.degree() > 0:
        q = curve_gcd(w, z)
        if q.degree() > 0:
            out.append((q, i))
        w, _ = w.divmod(q)
        yq, _ = z.divmod(q)
        z = yq - w.derivative()
        i += 1
    return out


def resultant(p: CurvePolynomial, q: CurvePolynomial) -> BaseScalar:
    """Resultant in K via the Euclidean remainder sequence."""
    arity = p.arity
    if p.is_zero() or q.is_zero():
        return BaseScalar.zero(arity)
    a, b = p, q
    res = BaseScalar.one(arity)
    while True:
        if b.degree() == 0:
            res = res * b.lead() ** a.degree()
            return res
        _, r = a.divmod(b)
        if r.is_zero():
            return BaseScalar.zero(arity)
        res = res * b.lead() ** (a.degree() - r.degree())
        if (a.degree() * b.degree()) % 2 == 1:
            res = -res
        a, b = b, r


class CurveFunction:
    """Rational function in t: a pair of CurvePolynomials with nonzero denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: CurvePolynomial, den: Optional[CurvePolynomial] = None,
                 reduce: bool = True):
        if den is None:
            den = CurvePolynomial.from_fraction(num.arity, 1)
        if den.is_zero():
            raise InputError("zero denominator in curve function")
        if num.is_zero():
            den = CurvePolynomial.from_fraction(num.arity, 1)
        elif den.degree() == 0:
            inv = den.coeff(0).invert()
            num = num * inv
            den = CurvePolynomial.from_fraction(num.arity, 1)
        elif reduce:
            g = curve_gcd(num, den)
            if g.degree() > 0:
                num, _ = num.divmod(g)
                den, _ = den.divmod(g)
            if den.degree() == 0:
                inv = den.coeff(0).invert()
                num = num * inv
                den = CurvePolynomial.from_fraction(num.arity, 1)
            else:
                li = den.lead().invert()
                num = num * li
                den = den.monic()
        self.num = num
        self.den = den

    # ---- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, arity: int) -> "CurveFunction":
        return cls(CurvePolynomial.zero(arity))

    @classmethod
    def const(cls, c: BaseScalar) -> "CurveFunction":
        return cls(CurvePolynomial.const(c))

    @classmethod
    def from_fraction(cls, arity: int, q) -> "CurveFunction":
        return cls(CurvePolynomial.from_fraction(arity, q))

    @classmethod
    def t(cls, arity: int) -> "CurveFunction":
        return cls(CurvePolynomial.t(arity))

    # ---- predicates ----------------------------------------------------------
    @property
    def arity(self) -> int:
        return self.num.arity

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def as_polynomial(self) -> CurvePolynomial:
        if not self.is_polynomial():
            raise InternalError("curve function is not polynomial")
        return self.num

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    # ---- arithmetic -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, CurveFunction):
            return other
        if isinstance(other, CurvePolynomial):
            return CurveFunction(other)
        if isinstance(other, BaseScalar):
            return CurveFunction.const(other)
        if isinstance(other, (int, Fraction)):
            return CurveFunction.from_fraction(self.arity, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return CurveFunction(self.num + other.num, self.den)
        return CurveFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return CurveFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, BaseScalar)):
            return CurveFunction(self.num * other, self.den, reduce=False)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CurveFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def invert(self) -> "CurveFunction":
        if self.is_zero():
            raise InputError("division by zero curve function")
        return CurveFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return other * self.invert()

    def __pow__(self, n: int) -> "CurveFunction":
        if n < 0:
            return self.invert() ** (-n)
        return CurveFunction(self.num**n, self.den**n, reduce=False)

    # ---- calculus ---------------------------------------------------------------
    def derivative(self) -> "CurveFunction":
        """d/dt by the quotient rule."""
        n, d = self.num, self.den
        if d.degree() == 0:
            return CurveFunction(n.derivative(), d, reduce=False)
        return CurveFunction(n.derivative() * d - n * d.derivative(), d * d)

    def d_base(self) -> List["CurveFunction"]:
        """Parameter differentials (da_j coefficients), coefficientwise quotient rule."""
        n, d = self.num, self.den
        nj = n.d_base()
        dj = d.d_base()
        out = []
        for j in range(self.arity):
            if d.degree() == 0:
                out.append(CurveFunction(nj[j]))
            else:
                out.append(CurveFunction(nj[j] * d - n * dj[j], d * d))
        return out

    def eval(self, x: BaseScalar) -> BaseScalar:
        dv = self.den.eval(x)
        if dv.is_zero():
            raise InputError("evaluation at a pole")
        return self.num.eval(x) / dv

    def poly_and_proper(self) -> Tuple[CurvePolynomial, "CurveFunction"]:
        """Split f = P(t) + proper part with deg(num) < deg(den)."""
        q, r = self.num.divmod(self.den)
        return q, CurveFunction(r, self.den, reduce=False)

    def subs_param(self, j: int, value: Fraction) -> "CurveFunction":
        den = self.den.subs_param(j, value)
        if den.is_zero():
            raise InputError(f"specialization a{j+1}={value} kills a denominator")
        return CurveFunction(self.num.subs_param(j, value), den)

    # ---- rendering --------------------------------------------------------------
    def render(self, names: Optional[Sequence[str]] = None, var: str = "t") -> str:
        ns = self.num.render(names, var)
        if self.is_polynomial():
            return ns
        return f"({ns})/({self.den.render(names, var)})"

    def __repr__(self):
        return f"CurveFunction({self.render()})"


class OneFormFunction:
    """A BaseOneForm-valued function of t: sum g_j(t) da_j."""

    __slots__ = ("arity", "comps")

    def __init__(self, comps: Sequence[CurveFunction]):
        self.comps: Tuple[CurveFunction, ...] = tuple(comps)
        self.arity = self.comps[0].arity
        if len(self.comps) != self.arity:
            raise InternalError("component count must equal parameter arity")

    @classmethod
    def zero(cls, arity: int) -> "OneFormFunction":
        return cls([CurveFunction.zero(arity) for _ in range(arity)])

    def __add__(self, other: "OneFormFunction") -> "OneFormFunction":
        return OneFormFunction([a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other: "OneFormFunction") -> "OneFormFunction":
        return OneFormFunction([a - b for a, b in zip(self.comps, other.comps)])

    def scale(self, c) -> "OneFormFunction":
        return OneFormFunction([a * c for a in self.comps])

    def eval(self, x: BaseScalar) -> BaseOneForm:
        return BaseOneForm([c.eval(x) for c in self.comps])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)
