"""Sparse multivariate polynomials over Q in the base parameters a1..ak.

Terms are kept in a dict keyed by exponent vectors; the canonical order for
rendering and leading-term extraction is graded lexicographic (total degree
first, ties broken lexicographically with a1 heaviest).  Two equal polynomials
always have identical term dicts, so dict comparison is exact equality.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..errors import InternalError

Exponent = Tuple[int, ...]

# Best-effort GCD guard: above this many term-pair operations the attempt is
# abandoned and 1 is returned.  Correctness never depends on GCD succeeding.
GCD_WORK_CAP = 200_000


class _GcdAbort(Exception):
    pass


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    if a == 0:
        return abs(b)
    if b == 0:
        return abs(a)
    return Fraction(math.gcd(a.numerator, b.numerator), math.lcm(a.denominator, b.denominator))


def grlex_key(e: Exponent) -> Tuple[int, Exponent]:
    return (sum(e), e)


class BasePolynomial:
    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: Optional[Dict[Exponent, Fraction]] = None):
        self.arity = arity
        self.terms: Dict[Exponent, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if c:
                    self.terms[e] = c if isinstance(c, Fraction) else Fraction(c)

    # ---- constructors -------------------------------------------------
    @classmethod
    def zero(cls, arity: int) -> "BasePolynomial":
        return cls(arity)

    @classmethod
    def constant(cls, arity: int, c) -> "BasePolynomial":
        c = Fraction(c)
        if c == 0:
            return cls(arity)
        return cls(arity, {(0,) * arity: c})

    @classmethod
    def one(cls, arity: int) -> "BasePolynomial":
        return cls.constant(arity, 1)

    @classmethod
    def variable(cls, arity: int, j: int) -> "BasePolynomial":
        if not 0 <= j < arity:
            raise InternalError(f"parameter index {j} out of range for arity {arity}")
        e = [0] * arity
        e[j] = 1
        return cls(arity, {tuple(e): Fraction(1)})

    # ---- predicates ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise InternalError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BasePolynomial):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, tuple(sorted(self.terms.items()))))

    # ---- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "BasePolynomial":
        if isinstance(other, BasePolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return BasePolynomial.constant(self.arity, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, Fraction(0)) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        out = BasePolynomial(self.arity)
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        out = BasePolynomial(self.arity)
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(other))
        if not isinstance(other, BasePolynomial):
            return NotImplemented
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = terms.get(e, Fraction(0)) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        out = BasePolynomial(self.arity)
        out.terms = terms
        return out

    __rmul__ = __mul__

    def scale(self, c: Fraction) -> "BasePolynomial":
        c = Fraction(c)
        out = BasePolynomial(self.arity)
        if c:
            out.terms = {e: cc * c for e, cc in self.terms.items()}
        return out

    def __pow__(self, n: int) -> "BasePolynomial":
        if n < 0:
            raise InternalError("negative power of a polynomial")
        r = BasePolynomial.one(self.arity)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    # ---- structure -----------------------------------------------------
    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, j: int) -> int:
        return max((e[j] for e in self.terms), default=-1)

    def partial(self, j: int) -> "BasePolynomial":
        terms: Dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            if e[j]:
                e2 = list(e)
                e2[j] -= 1
                terms[tuple(e2)] = c * e[j]
        out = BasePolynomial(self.arity)
        out.terms = terms
        return out

    def subs_param(self, j: int, value: Fraction) -> "BasePolynomial":
        """Substitute a rational constant for parameter j (arity unchanged)."""
        value = Fraction(value)
        out = BasePolynomial(self.arity)
        for e, c in self.terms.items():
            e2 = list(e)
            n = e2[j]
            e2[j] = 0
            cc = c * value**n
            e2t = tuple(e2)
            s = out.terms.get(e2t, Fraction(0)) + cc
            if s:
                out.terms[e2t] = s
            else:
                out.terms.pop(e2t, None)
        return out

    def sorted_terms(self) -> List[Tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading(self) -> Tuple[Exponent, Fraction]:
        if self.is_zero():
            raise InternalError("leading term of zero polynomial")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def content(self) -> Fraction:
        """Rational content, carrying the sign of the grlex-leading coefficient."""
        if self.is_zero():
            return Fraction(0)
        g = Fraction(0)
        for c in self.terms.values():
            g = _frac_gcd(g, c)
        _, lead = self.leading()
        return g if lead > 0 else -g

    def primitive_part(self) -> "BasePolynomial":
        if self.is_zero():
            return self
        return self.scale(1 / self.content())

    def size(self) -> int:
        return len(self.terms)

    # ---- rendering -------------------------------------------------------
    def render(self, names: Optional[Sequence[str]] = None) -> str:
        if self.is_zero():
            return "0"
        if names is None:
            names = [f"a{i+1}" for i in range(self.arity)]
        parts: List[str] = []
        for e, c in self.sorted_terms():
            vars_ = [
                names[i] + (f"^{p}" if p > 1 else "")
                for i, p in enumerate(e)
                if p > 0
            ]
            if not vars_:
                body = str(c) if c > 0 else str(-c)
            else:
                mono = "*".join(vars_)
                if abs(c) == 1:
                    body = mono
                else:
                    body = f"{abs(c)}*{mono}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+" if c > 0 else "-") + body)
        return "".join(parts)

    def __repr__(self):
        return f"BasePolynomial({self.render()})"


# ---------------------------------------------------------------------------
# Exact division and best-effort GCD
# ---------------------------------------------------------------------------

def poly_divexact_or_none(p: BasePolynomial, d: BasePolynomial) -> Optional[BasePolynomial]:
    """Exact division p/d, or None as soon as divisibility fails."""
    if d.is_zero():
        raise InternalError("division by zero polynomial")
    if p.is_zero():
        return p
    if d.is_constant():
        return p.scale(1 / d.constant_value())
    q = BasePolynomial(p.arity)
    rem = p
    de, dc = d.leading()
    while not rem.is_zero():
        re, rc = rem.leading()
        qe = tuple(a - b for a, b in zip(re, de))
        if any(x < 0 for x in qe):
            return None
        qc = rc / dc
        term = BasePolynomial(p.arity, {qe: qc})
        q = q + term
        rem = rem - term * d
    return q


def poly_divexact(p: BasePolynomial, d: BasePolynomial) -> BasePolynomial:
    """Exact division p/d; raises InternalError if d does not divide p."""
    q = poly_divexact_or_none(p, d)
    if q is None:
        raise InternalError("inexact polynomial division")
    return q


def _univar(p: BasePolynomial, v: int) -> Dict[int, BasePolynomial]:
    """View p as a univariate polynomial in variable v with polynomial coefficients."""
    out: Dict[int, BasePolynomial] = {}
    for e, c in p.terms.items():
        d = e[v]
        e2 = list(e)
        e2[v] = 0
        coeff = out.setdefault(d, BasePolynomial(p.arity))
        key = tuple(e2)
        s = coeff.terms.get(key, Fraction(0)) + c
        if s:
            coeff.terms[key] = s
        else:
            coeff.terms.pop(key, None)
    return {d: c for d, c in out.items() if not c.is_zero()}


def _from_univar(u: Dict[int, BasePolynomial], v: int, arity: int) -> BasePolynomial:
    out = BasePolynomial(arity)
    for d, coeff in u.items():
        for e, c in coeff.terms.items():
            e2 = list(e)
            e2[v] += d
            out.terms[tuple(e2)] = c
    return out


def _gcd_many(polys: Iterable[BasePolynomial], budget: List[int]) -> BasePolynomial:
    g: Optional[BasePolynomial] = None
    for p in polys:
        g = p if g is None else _gcd_core(g, p, budget)
        if g.is_constant() and not g.is_zero():
            return BasePolynomial.one(g.arity)
    assert g is not None
    return g


def _gcd_core(p: BasePolynomial, q: BasePolynomial, budget: List[int]) -> BasePolynomial:
    if p.is_zero():
        return q.primitive_part()
    if q.is_zero():
        return p.primitive_part()
    if p.is_constant() or q.is_constant():
        return BasePolynomial.one(p.arity)
    budget[0] -= p.size() + q.size()
    if budget[0] < 0:
        raise _GcdAbort
    v = max(
        i
        for i in range(p.arity)
        if p.degree_in(i) > 0 or q.degree_in(i) > 0
    )
    A = _univar(p, v)
    B = _univar(q, v)
    cont_a = _gcd_many(A.values(), budget)
    cont_b = _gcd_many(B.values(), budget)
    cont = _gcd_core(cont_a, cont_b, budget)
    A = {d: poly_divexact(c, cont_a) for d, c in A.items()}
    B = {d: poly_divexact(c, cont_b) for d, c in B.items()}
    # primitive pseudo-remainder sequence in variable v
    while B:
        degA = max(A)
        degB = max(B)
        if degA < degB:
            A, B = B, A
            continue
        R = _prem(A, B, v, p.arity, budget)
        A, B = B, R
        if B:
            cb = _gcd_many(B.values(), budget)
            B = {d: poly_divexact(c, cb) for d, c in B.items()}
    g = _from_univar(A, v, p.arity)
    return (g * cont).primitive_part()


def _rational_normalize(A: Dict[int, BasePolynomial]) -> Dict[int, BasePolynomial]:
    """Divide all coefficients by their common rational content (keeps gcd class)."""
    g = Fraction(0)
    for c in A.values():
        g = _frac_gcd(g, c.content())
        if g == 1:
            return A
    if g in (0, 1):
        return A
    return {d: c.scale(1 / g) for d, c in A.items()}


def _weight(p: BasePolynomial) -> int:
    w = 0
    for c in p.terms.values():
        w += 1 + (c.numerator.bit_length() + c.denominator.bit_length()) // 16
    return w


def _prem(A: Dict[int, BasePolynomial], B: Dict[int, BasePolynomial], v: int,
          arity: int, budget: List[int]) -> Dict[int, BasePolynomial]:
    degB = max(B)
    lcB = B[degB]
    A = dict(A)
    while A and max(A) >= degB:
        degA = max(A)
        lcA = A[degA]
        shift = degA - degB
        newA: Dict[int, BasePolynomial] = {}
        keys = set(A) | {d + shift for d in B}
        for d in keys:
            budget[0] -= _weight(lcA) + _weight(lcB)
            if budget[0] < 0:
                raise _GcdAbort
            term = BasePolynomial(arity)
            if d in A:
                term = term + lcB * A[d]
            if d - shift in B:
                term = term - lcA * B[d - shift]
            if not term.is_zero():
                newA[d] = term
        A = _rational_normalize(newA)
    return A


_GCD_CACHE: Dict[Tuple[int, frozenset, frozenset], BasePolynomial] = {}
_GCD_CACHE_MAX = 8192


def poly_gcd(p: BasePolynomial, q: BasePolynomial) -> BasePolynomial:
    """Best-effort primitive GCD; returns 1 when the work cap is exceeded."""
    key = None
    if p.size() + q.size() <= 64:
        kp, kq = frozenset(p.terms.items()), frozenset(q.terms.items())
        key = (p.arity, kp, kq) if len(kp) <= len(kq) else (p.arity, kq, kp)
        hit = _GCD_CACHE.get(key)
        if hit is not None:
            return hit
    try:
        g = _gcd_core(p, q, [GCD_WORK_CAP])
    except _GcdAbort:
        g = BasePolynomial.one(p.arity)
    if key is not None:
        if len(_GCD_CACHE) >= _GCD_CACHE_MAX:
            _GCD_CACHE.clear()
        _GCD_CACHE[key] = g
    return g
