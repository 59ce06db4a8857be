"""gmdet: exact Gauss-Manin determinant connections on open subsets of P^1.

The package computes both sides of the determinant formula for (possibly
irregular) rank-r connections over K = Q(a1..ak) and compares them in
Omega^1_K modulo dlog of units.
"""

__version__ = "0.1.0"
