"""Differential forms on the base: one-forms, two-forms, d, and dlog."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from ..errors import InputError, InternalError
from .scalar import BaseScalar


class BaseOneForm:
    """Sum g_1 da_1 + ... + g_k da_k with BaseScalar coefficients."""

    __slots__ = ("arity", "comps")

    def __init__(self, comps: Sequence[BaseScalar]):
        self.comps: Tuple[BaseScalar, ...] = tuple(comps)
        if not self.comps:
            raise InternalError("one-form needs at least arity 1")
        self.arity = self.comps[0].arity
        if any(c.arity != self.arity for c in self.comps) or len(self.comps) != self.arity:
            raise InternalError("one-form component count must equal parameter arity")

    @classmethod
    def zero(cls, arity: int) -> "BaseOneForm":
        return cls([BaseScalar.zero(arity) for _ in range(arity)])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BaseOneForm):
            return NotImplemented
        return all(a == b for a, b in zip(self.comps, other.comps))

    def __add__(self, other: "BaseOneForm") -> "BaseOneForm":
        return BaseOneForm([a + b for a, b in zip(self.comps, other.comps)])

    def __neg__(self) -> "BaseOneForm":
        return BaseOneForm([-a for a in self.comps])

    def __sub__(self, other: "BaseOneForm") -> "BaseOneForm":
        return self + (-other)

    def scale(self, c) -> "BaseOneForm":
        return BaseOneForm([a * c for a in self.comps])

    def __mul__(self, c):
        if isinstance(c, (int, Fraction, BaseScalar)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def subs_param(self, j: int, value: Fraction) -> "BaseOneForm":
        """Specialize a_j; the da_j component is dropped (set to zero)."""
        comps = [c.subs_param(j, value) for c in self.comps]
        comps[j] = BaseScalar.zero(self.arity)
        return BaseOneForm(comps)

    def render(self, names: Optional[Sequence[str]] = None) -> str:
        if names is None:
            names = [f"a{i+1}" for i in range(self.arity)]
        parts = []
        for i, c in enumerate(self.comps):
            if c.is_zero():
                continue
            parts.append(f"({c.render(names)})*d{names[i]}")
        return "+".join(parts) if parts else "0"

    def __repr__(self):
        return f"BaseOneForm({self.render()})"


class BaseTwoForm:
    """Sum over i<j of g_ij da_i^da_j."""

    __slots__ = ("arity", "comps")

    def __init__(self, arity: int, comps: Optional[Dict[Tuple[int, int], BaseScalar]] = None):
        self.arity = arity
        self.comps: Dict[Tuple[int, int], BaseScalar] = {}
        if comps:
            for (i, j), c in comps.items():
                if not (0 <= i < j < arity):
                    raise InternalError("two-form indices must be strictly increasing")
                if not c.is_zero():
                    self.comps[(i, j)] = c

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other) -> bool:
        if not isinstance(other, BaseTwoForm):
            return NotImplemented
        keys = set(self.comps) | set(other.comps)
        z = BaseScalar.zero(self.arity)
        return all(self.comps.get(k, z) == other.comps.get(k, z) for k in keys)

    def __add__(self, other: "BaseTwoForm") -> "BaseTwoForm":
        out: Dict[Tuple[int, int], BaseScalar] = dict(self.comps)
        for k, c in other.comps.items():
            out[k] = out.get(k, BaseScalar.zero(self.arity)) + c
        return BaseTwoForm(self.arity, out)

    def __neg__(self) -> "BaseTwoForm":
        return BaseTwoForm(self.arity, {k: -c for k, c in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def render(self, names: Optional[Sequence[str]] = None) -> str:
        if names is None:
            names = [f"a{i+1}" for i in range(self.arity)]
        parts = []
        for (i, j) in sorted(self.comps):
            parts.append(f"({self.comps[(i,j)].render(names)})*d{names[i]}^d{names[j]}")
        return "+".join(parts) if parts else "0"

    def __repr__(self):
        return f"BaseTwoForm({self.render()})"


def d_base(x: BaseScalar) -> BaseOneForm:
    """Total differential in the parameters: sum (dx/da_j) da_j."""
    return BaseOneForm([x.partial(j) for j in range(x.arity)])


def exterior_d(w: BaseOneForm) -> BaseTwoForm:
    comps: Dict[Tuple[int, int], BaseScalar] = {}
    for i in range(w.arity):
        for j in range(i + 1, w.arity):
            comps[(i, j)] = w.comps[j].partial(i) - w.comps[i].partial(j)
    return BaseTwoForm(w.arity, comps)


def dlog(u: BaseScalar) -> BaseOneForm:
    """d(u)/u, computed as dlog(num) - dlog(den) to keep sizes small."""
    if u.is_zero():
        raise InputError("dlog of zero")
    comps = []
    n, d = u.num, u.den
    for j in range(u.arity):
        comps.append(BaseScalar(n.partial(j), n) - BaseScalar(d.partial(j), d))
    return BaseOneForm(comps)
