"""Exact arithmetic over K = Q(a1..ak) and K(t): the computational substrate."""
from .poly import BasePolynomial, poly_gcd, poly_divexact
from .scalar import BaseScalar
from .forms import BaseOneForm, BaseTwoForm, d_base, exterior_d, dlog
from .curve import (
    CurvePolynomial,
    CurveFunction,
    OneFormFunction,
    curve_gcd,
    squarefree_decomposition,
    resultant,
)
from .matrices import Matrix
from .series import LaurentSeries
from .residues import (
    INFINITY,
    Point,
    is_infinity,
    point_eq,
    render_point,
    laurent_expand,
    expand_form,
    residue,
    residue_matrix,
    residue_oneform,
    residue_sum,
    pole_order,
    expand_matrix_function,
    expand_matrix_form,
)

__all__ = [
    "BasePolynomial", "poly_gcd", "poly_divexact",
    "BaseScalar",
    "BaseOneForm", "BaseTwoForm", "d_base", "exterior_d", "dlog",
    "CurvePolynomial", "CurveFunction", "OneFormFunction",
    "curve_gcd", "squarefree_decomposition", "resultant",
    "Matrix", "LaurentSeries",
    "INFINITY", "Point", "is_infinity", "point_eq", "render_point",
    "laurent_expand", "expand_form", "residue", "residue_matrix",
    "residue_oneform", "residue_sum", "pole_order",
    "expand_matrix_function", "expand_matrix_form",
]
