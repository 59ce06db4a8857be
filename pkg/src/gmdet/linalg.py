"""Exact Gaussian elimination over the fraction field K = Q(a1..ak)."""
from __future__ import annotations

from typing import List, Optional, Tuple

from .errors import InternalError
from .kernel import BaseScalar


def rref(rows: List[List[BaseScalar]]) -> Tuple[List[List[BaseScalar]], List[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    if not rows:
        return [], []
    rows = [list(r) for r in rows]
    ncols = len(rows[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if not rows[i][c].is_zero():
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].invert()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def nullspace(rows: List[List[BaseScalar]], ncols: int, arity: int) -> List[List[BaseScalar]]:
    """Basis of the right kernel of the row system."""
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    zero = BaseScalar.zero(arity)
    one = BaseScalar.one(arity)
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def solve(rows: List[List[BaseScalar]], rhs: List[BaseScalar], arity: int
          ) -> Optional[List[BaseScalar]]:
    """One solution of rows * x = rhs with free variables set to zero, or None."""
    if not rows:
        return [] if all(b.is_zero() for b in rhs) else None
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    zero = BaseScalar.zero(arity)
    x = [zero] * ncols
    for r, p in enumerate(pivots):
        if p == ncols:
            return None  # pivot in the augmented column: inconsistent
        x[p] = red[r][ncols]
    return x
