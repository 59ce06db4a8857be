"""Truncated Laurent series with an explicit guaranteed window.

A series stores coefficients for z^val .. z^trunc and refuses (loudly) to
answer questions beyond z^trunc.  Coefficients may be BaseScalars, matrices,
or anything with +, unary -, *, and is_zero().
"""
from __future__ import annotations

from typing import Callable, List, Optional, Sequence

from ..errors import InternalError, TruncationError


class LaurentSeries:
    __slots__ = ("val", "coeffs", "trunc", "zero")

    def __init__(self, val: int, coeffs: Sequence, trunc: int, zero):
        """coeffs[i] is the coefficient of z^(val+i); window guaranteed through z^trunc."""
        cs = list(coeffs)
        if len(cs) != trunc - val + 1:
            raise InternalError("series coefficient count does not match window")
        while cs and cs[0].is_zero():
            cs.pop(0)
            val += 1
        self.val = val
        self.coeffs = cs
        self.trunc = trunc
        self.zero = zero

    @classmethod
    def zero_series(cls, trunc: int, zero) -> "LaurentSeries":
        return cls(trunc + 1, [], trunc, zero)

    @classmethod
    def monomial(cls, coeff, n: int, trunc: int, zero) -> "LaurentSeries":
        if n > trunc:
            return cls.zero_series(trunc, zero)
        pad = [zero] * (trunc - n)
        return cls(n, [coeff] + pad, trunc, zero)

    def is_zero(self) -> bool:
        """Zero to the guaranteed order (identically zero as far as we can see)."""
        return not self.coeffs

    def valuation(self) -> int:
        if not self.coeffs:
            raise TruncationError(f"series is zero through its window O(z^{self.trunc + 1})")
        return self.val

    def coeff(self, n: int):
        if n > self.trunc:
            raise TruncationError(
                f"coefficient of z^{n} requested but window ends at z^{self.trunc}")
        if n < self.val or not self.coeffs:
            return self.zero
        return self.coeffs[n - self.val]

    def residue(self):
        return self.coeff(-1)

    def at_zero(self):
        return self.coeff(0)

    def truncate(self, new_trunc: int) -> "LaurentSeries":
        if new_trunc > self.trunc:
            raise TruncationError("cannot extend a series window")
        if new_trunc < self.val:
            return LaurentSeries.zero_series(new_trunc, self.zero)
        return LaurentSeries(self.val, self.coeffs[: new_trunc - self.val + 1], new_trunc, self.zero)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by z^k."""
        return LaurentSeries(self.val + k, list(self.coeffs), self.trunc + k, self.zero)

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        trunc = min(self.trunc, other.trunc)
        val = min(self.val if self.coeffs else trunc + 1,
                  other.val if other.coeffs else trunc + 1)
        if val > trunc:
            return LaurentSeries.zero_series(trunc, self.zero)
        coeffs = []
        for n in range(val, trunc + 1):
            a = self.coeffs[n - self.val] if self.coeffs and self.val <= n <= self.trunc else self.zero
            b = other.coeffs[n - other.val] if other.coeffs and other.val <= n <= other.trunc else self.zero
            coeffs.append(a + b)
        return LaurentSeries(val, coeffs, trunc, self.zero)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.val, [-c for c in self.coeffs], self.trunc, self.zero)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __mul__(self, other) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        if not self.coeffs or not other.coeffs:
            trunc = min(
                (self.val if self.coeffs else self.trunc + 1) + other.trunc,
                (other.val if other.coeffs else other.trunc + 1) + self.trunc,
            )
            return LaurentSeries.zero_series(trunc, self.zero)
        val = self.val + other.val
        trunc = min(self.val + other.trunc, other.val + self.trunc)
        n = trunc - val + 1
        coeffs: List = []
        for m in range(n):
            acc = None
            for i in range(0, m + 1):
                if i >= len(self.coeffs) or (m - i) >= len(other.coeffs):
                    continue
                term = self.coeffs[i] * other.coeffs[m - i]
                acc = term if acc is None else acc + term
            coeffs.append(acc if acc is not None else _zero_product(self.zero, other.zero))
        return LaurentSeries(val, coeffs, trunc, _zero_product(self.zero, other.zero))

    def scale(self, c) -> "LaurentSeries":
        return LaurentSeries(self.val, [x * c for x in self.coeffs], self.trunc, self.zero)

    def rscale(self, c) -> "LaurentSeries":
        return LaurentSeries(self.val, [c * x for x in self.coeffs], self.trunc, self.zero)

    def inverse(self, invert_leading: Optional[Callable] = None) -> "LaurentSeries":
        """Multiplicative inverse; the leading coefficient must be invertible."""
        if not self.coeffs:
            raise TruncationError("cannot invert a series that is zero through its window")
        c0 = self.coeffs[0]
        if invert_leading is None:
            inv0 = c0.invert()
        else:
            inv0 = invert_leading(c0)
        n = self.trunc - self.val + 1
        out = [inv0]
        for m in range(1, n):
            acc = None
            for j in range(1, m + 1):
                if j >= len(self.coeffs):
                    break
                term = self.coeffs[j] * out[m - j]
                acc = term if acc is None else acc + term
            if acc is None:
                nxt = self.zero
            else:
                nxt = -(inv0 * acc)
            out.append(nxt)
        return LaurentSeries(-self.val, out, -self.val + n - 1, self.zero)

    def derivative(self) -> "LaurentSeries":
        """d/dz; the window shrinks by one order."""
        coeffs = []
        for i, c in enumerate(self.coeffs):
            n = self.val + i
            coeffs.append(c * n)
        if self.coeffs:
            return LaurentSeries(self.val - 1, coeffs, self.trunc - 1, self.zero)
        return LaurentSeries.zero_series(self.trunc - 1, self.zero)

    def map_coeffs(self, f: Callable, zero) -> "LaurentSeries":
        return LaurentSeries(self.val, [f(c) for c in self.coeffs], self.trunc, zero)

    def render(self, coeff_render: Callable, var: str = "z") -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            n = self.val + i
            if n == 0:
                parts.append(f"({coeff_render(c)})")
            elif n == 1:
                parts.append(f"({coeff_render(c)})*{var}")
            else:
                parts.append(f"({coeff_render(c)})*{var}^{n}")
        body = "+".join(parts) if parts else "0"
        return f"{body}+O({var}^{self.trunc + 1})"

    def __repr__(self):
        return f"LaurentSeries(val={self.val if self.coeffs else None}, trunc={self.trunc})"


def _zero_product(za, zb):
    # the zero of the product coefficient space; for square matrices and scalars
    # za*zb works, and mixed scalar/matrix products follow the left factor
    try:
        return za * zb
    except Exception:
        return za
