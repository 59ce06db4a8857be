"""Connections on open subsets of P^1 and their local analysis at singular points.

A connection is nabla = d + A with A = A_t dt + sum_j A_j da_j, the entries
rational functions of t over K = Q(a1..ak).  All local work happens in the
chart z = t - e (finite points, e possibly parameter-dependent) or z = 1/t
(infinity); in either chart the local matrix takes the shape

    A = g * s + eta * z^(1-m),   s a local generator of omega(D) at the point,

with g and the eta_j regular matrices of series.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InputError, InternalError, NonClosedError, PreconditionError
from .kernel import (
    INFINITY,
    BaseOneForm,
    BaseScalar,
    CurveFunction,
    CurvePolynomial,
    LaurentSeries,
    Matrix,
    Point,
    dlog,
    expand_form,
    expand_matrix_form,
    expand_matrix_function,
    is_infinity,
    laurent_expand,
    point_eq,
    render_point,
)

DEFAULT_TRUNCATION_MARGIN = 2  # local data reaches order 2m + margin by default


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------

@dataclass
class PolePoint:
    point: Point
    order: int  # m >= 0; the relative pole order of A_t dt at the point


@dataclass
class PoleProfile:
    points: List[PolePoint]

    def order_at(self, point: Point) -> int:
        for p in self.points:
            if point_eq(p.point, point):
                return p.order
        return 0

    @property
    def n_points(self) -> int:
        return len(self.points)

    def total_order(self) -> int:
        return sum(p.order for p in self.points)

    def singular_points(self) -> List[PolePoint]:
        return [p for p in self.points if p.order >= 1]


@dataclass
class Connection:
    rank: int
    arity: int
    finite_poles: Tuple[BaseScalar, ...]
    a_t: Matrix                 # r x r of CurveFunction: the dt-coefficient
    a_par: Tuple[Matrix, ...]   # k matrices of CurveFunction: the da_j-coefficients
    profile: PoleProfile = field(repr=False)

    def parameter_matrix(self, j: int) -> Matrix:
        return self.a_par[j]


@dataclass
class LocalConnectionData:
    point: Point
    order: int                      # m at the point
    section_unit: LaurentSeries     # u(z) with s = u dz/z^m; default u = 1
    g: LaurentSeries                # series of r x r BaseScalar matrices
    eta: List[LaurentSeries]        # per parameter j: N_j z^(m-1), regular
    g0: Matrix
    det_g0: BaseScalar
    assumption_51: bool             # parameter parts regular after chart absorption
    truncation: int

    @property
    def assumption_53(self) -> bool:
        return not self.det_g0.is_zero()


@dataclass
class PrincipalPart:
    """Polar tail sum_{n>=1} c_n z^(-n) of a local primitive (rank 1)."""
    point: Point
    coeffs: Dict[int, BaseScalar]

    def is_zero(self) -> bool:
        return not self.coeffs

    def max_order(self) -> int:
        return max(self.coeffs, default=0)

    def render(self, names=None) -> str:
        if not self.coeffs:
            return "0"
        parts = [f"({self.coeffs[n].render(names)})*z^-{n}" for n in sorted(self.coeffs)]
        return "+".join(parts)


@dataclass
class MinimalityVerdict:
    point: Point
    order: int
    status: str  # "Pass" | "Fail" | "Inconclusive"
    detail: str = ""


@dataclass
class Curvature:
    mixed: List[Matrix]                       # per j: da_j ^ dt coefficient
    base: Dict[Tuple[int, int], Matrix]       # per i<j: da_i ^ da_j coefficient

    @property
    def is_vertical(self) -> bool:
        return all(m.is_zero() for m in self.mixed)

    @property
    def is_integrable(self) -> bool:
        return self.is_vertical and all(m.is_zero() for m in self.base.values())


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def _check_declared_poles(conn_matrices: Sequence[Matrix], finite_poles: Sequence[BaseScalar],
                          arity: int) -> None:
    for m in conn_matrices:
        for row in m.data:
            for f in row:
                den = f.den
                for e in finite_poles:
                    lin = CurvePolynomial(arity, [-e, BaseScalar.one(arity)])
                    while den.degree() > 0:
                        q, r = den.divmod(lin)
                        if r.is_zero():
                            den = q
                        else:
                            break
                if den.degree() > 0:
                    raise InputError(
                        "entry has a pole outside the declared support; "
                        f"offending denominator factor: {den.render()}")


def make_connection(rank: int, finite_poles: Sequence[BaseScalar], a_t: Matrix,
                    a_par: Sequence[Matrix]) -> Connection:
    """Validate shapes and supports, compute the pole profile exactly."""
    if rank < 1:
        raise InputError("rank must be at least 1")
    if a_t.rows != rank or a_t.cols != rank:
        raise InputError(f"dt matrix must be {rank}x{rank}")
    arity = a_t.data[0][0].arity
    for j, m in enumerate(a_par):
        if m.rows != rank or m.cols != rank:
            raise InputError(f"matrix for parameter {j+1} must be {rank}x{rank}")
    poles = list(finite_poles)
    for i in range(len(poles)):
        for j in range(i + 1, len(poles)):
            if poles[i] == poles[j]:
                raise InputError(f"duplicate finite pole {poles[i].render()}")
    _check_declared_poles([a_t, *a_par], poles, arity)

    points: List[PolePoint] = []
    kept: List[BaseScalar] = []
    for e in poles:
        m = _matrix_form_order(a_t, e)
        if m >= 1:
            points.append(PolePoint(e, m))
            kept.append(e)
        # points where the relative matrix turns out regular are pruned from D
    points.append(PolePoint(INFINITY, _matrix_form_order(a_t, INFINITY)))
    profile = PoleProfile(points)
    return Connection(rank, arity, tuple(kept), a_t, tuple(a_par), profile)


def _matrix_form_order(m: Matrix, point: Point) -> int:
    """Pole order of (matrix) dt at the point, from exact valuations."""
    order = 0
    for row in m.data:
        for f in row:
            if f.is_zero():
                continue
            s = expand_form(f, point, 0)
            if s.coeffs:
                order = max(order, -s.valuation())
    return order


# ---------------------------------------------------------------------------
# curvature
# ---------------------------------------------------------------------------

def curvature(conn: Connection) -> Curvature:
    """F = dA + A^A split into mixed (da_j^dt) and base (da_i^da_j) parts."""
    mixed = []
    for j in range(conn.arity):
        aj = conn.a_par[j]
        d_at = conn.a_t.map(lambda f, j=j: f.d_base()[j])
        d_aj = aj.map(lambda f: f.derivative())
        comm = aj * conn.a_t - conn.a_t * aj
        mixed.append(d_at - d_aj + comm)
    base: Dict[Tuple[int, int], Matrix] = {}
    for i in range(conn.arity):
        for j in range(i + 1, conn.arity):
            ai, aj = conn.a_par[i], conn.a_par[j]
            term = aj.map(lambda f, i=i: f.d_base()[i]) - ai.map(lambda f, j=j: f.d_base()[j])
            base[(i, j)] = term + (ai * aj - aj * ai)
    return Curvature(mixed, base)


# ---------------------------------------------------------------------------
# local data
# ---------------------------------------------------------------------------

def local_chart_series(conn: Connection, point: Point, order: int
                       ) -> Tuple[LaurentSeries, List[LaurentSeries]]:
    """Expand the connection in the local chart at the point.

    Returns (M, [N_j]) where A = M(z) dz + sum_j N_j(z) da_j in the chart.
    At a parameter-dependent finite point e(a) the substitution t = z + e
    absorbs (de/da_j) A_t into the da_j part.
    """
    M = expand_matrix_form(conn.a_t, point, order)
    Ns = []
    for j in range(conn.arity):
        N = expand_matrix_function(conn.a_par[j], point, order)
        if not is_infinity(point):
            dj = point.partial(j)
            if not dj.is_zero():
                At = expand_matrix_function(conn.a_t, point, order)
                N = N + At.scale(dj)
        Ns.append(N)
    return M, Ns


def local_data(conn: Connection, point: Point,
               section_unit: Optional[LaurentSeries] = None,
               truncation: Optional[int] = None) -> LocalConnectionData:
    """Leading local data g, eta at a singular point, to the requested order."""
    m = conn.profile.order_at(point)
    if m < 1:
        raise InputError(f"point {render_point(point)} is not singular for this connection")
    if truncation is None:
        truncation = 2 * m + DEFAULT_TRUNCATION_MARGIN
    order = truncation
    M, Ns = local_chart_series(conn, point, order)
    zero_scalar = BaseScalar.zero(conn.arity)
    one = BaseScalar.one(conn.arity)
    if section_unit is None:
        section_unit = LaurentSeries(0, [one] + [zero_scalar] * order, order, zero_scalar)
    # g = M z^m / u must be regular
    g = (M.shift(m)) * section_unit.inverse()
    if g.coeffs and g.valuation() < 0:
        raise InternalError(
            f"relative pole order at {render_point(point)} exceeds the declared m={m}")
    eta = []
    ass51 = True
    for N in Ns:
        En = N.shift(m - 1)
        if En.coeffs and En.valuation() < 0:
            ass51 = False
        eta.append(En)
    g = g.truncate(min(g.trunc, order))
    g0 = g.coeff(0) if g.coeffs else Matrix.filled(conn.rank, conn.rank, zero_scalar)
    if not isinstance(g0, Matrix):
        g0 = Matrix.filled(conn.rank, conn.rank, zero_scalar)
    det_g0 = g0.det()
    return LocalConnectionData(point, m, section_unit, g, eta, g0, det_g0, ass51, order)


# ---------------------------------------------------------------------------
# invariants of the profile
# ---------------------------------------------------------------------------

def euler_characteristic(conn: Connection) -> int:
    """chi = r (2 - 2g - n - sum_i max(0, m_i - 1)) with g = 0 on P^1.

    n counts all missing points: the declared finite poles that survived
    pruning, plus infinity (the curve carries the affine coordinate t).
    """
    n = len(conn.finite_poles) + 1
    irr = sum(max(0, p.order - 1) for p in conn.profile.points)
    return conn.rank * (2 - n - irr)


def torsion_term(conn: Connection, rank_r_extrapolation: bool = False) -> BaseOneForm:
    """sum over singular points of (m/2) dlog(g0), with the default section.

    In rank 1 this is the 2-torsion correction of the determinant formula.
    For rank r >= 2 the value (m/2) dlog det(g0) is a labeled extrapolation,
    available only behind the flag and never asserted as proven.
    """
    if conn.rank != 1 and not rank_r_extrapolation:
        raise PreconditionError("torsion_term", "rank 1",
                                "pass rank_r_extrapolation=True for the labeled rank-r variant")
    total = BaseOneForm.zero(conn.arity)
    for p in conn.profile.singular_points():
        ld = local_data(conn, p.point)
        if ld.det_g0.is_zero():
            raise PreconditionError("torsion_term", "g0 invertible",
                                    f"degenerate leading coefficient at {render_point(p.point)}"
                                    " signals a non-minimal pole divisor")
        total = total + dlog(ld.det_g0).scale(Fraction(p.order, 2))
    return total


def minimality_check(conn: Connection) -> List[MinimalityVerdict]:
    """Quasi-isomorphism criterion per singular point.

    m >= 2: pass iff det g0 != 0.  m = 1: pass iff det(g0 - n Id) != 0 for all
    integers n >= 1; integer roots are found through rational specializations
    of the characteristic polynomial and then verified symbolically.
    """
    out = []
    for p in conn.profile.singular_points():
        ld = local_data(conn, p.point)
        if p.order >= 2:
            ok = not ld.det_g0.is_zero()
            out.append(MinimalityVerdict(p.point, p.order, "Pass" if ok else "Fail",
                                         "" if ok else "det g0 = 0"))
            continue
        verdict = _log_point_minimality(conn, ld)
        out.append(MinimalityVerdict(p.point, p.order, verdict[0], verdict[1]))
    return out


def _log_point_minimality(conn: Connection, ld: LocalConnectionData) -> Tuple[str, str]:
    r = conn.rank
    arity = conn.arity
    # characteristic polynomial D(n) = det(g0 - n I) by interpolation at n=0..r
    samples = []
    for n0 in range(r + 1):
        shifted = ld.g0 - Matrix.identity(r, BaseScalar.one(arity), BaseScalar.zero(arity)).scale(
            BaseScalar.from_fraction(arity, n0))
        samples.append(shifted.det())
    coeffs = _interpolate(samples)  # coefficients of D(n) in n, BaseScalar
    # specialize parameters to generic rationals; leading coeff is +-1 so the
    # rational root test on the specialization is never degenerate
    spec = []
    for c in coeffs:
        s = c
        for j in range(arity):
            try:
                s = s.subs_param(j, Fraction(17 + 7 * j, 3))
            except InputError:
                return ("Inconclusive", "specialization hit a pole of a coefficient")
        spec.append(s.as_fraction())
    candidates = _positive_integer_roots(spec)
    for n0 in candidates:
        value = _eval_poly(coeffs, n0, arity)
        if value.is_zero():
            return ("Fail", f"det(g0 - {n0} Id) = 0")
    return ("Pass", "")


def _interpolate(samples: List[BaseScalar]) -> List[BaseScalar]:
    """Lagrange interpolation at nodes 0..len-1, returning coefficient list."""
    r = len(samples) - 1
    arity = samples[0].arity
    coeffs = [BaseScalar.zero(arity) for _ in range(r + 1)]
    for i, yi in enumerate(samples):
        # basis polynomial prod_{j != i} (n - j)/(i - j)
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(r + 1):
            if j == i:
                continue
            basis = _poly_mul_lin(basis, Fraction(-j))
            denom *= Fraction(i - j)
        for d, b in enumerate(basis):
            coeffs[d] = coeffs[d] + yi * BaseScalar.from_fraction(arity, b / denom)
    return coeffs


def _poly_mul_lin(coeffs: List[Fraction], c: Fraction) -> List[Fraction]:
    # multiply a rational coefficient list by (n + c)
    out = [Fraction(0)] * (len(coeffs) + 1)
    for i, a in enumerate(coeffs):
        out[i] += a * c
        out[i + 1] += a
    return out


def _positive_integer_roots(spec: List[Fraction]) -> List[int]:
    while spec and spec[-1] == 0:
        spec.pop()
    if not spec:
        return []
    # clear denominators -> integer coefficients
    from math import lcm
    denom = 1
    for c in spec:
        denom = lcm(denom, c.denominator)
    ints = [int(c * denom) for c in spec]
    lead = ints[-1]
    val = 0
    while val < len(ints) and ints[val] == 0:
        val += 1
    if val == len(ints):
        return []
    const = abs(ints[val])
    divisors = set()
    d = 1
    while d * d <= const:
        if const % d == 0:
            divisors.add(d)
            divisors.add(const // d)
        d += 1
    return sorted(n for n in divisors if n >= 1 and _int_poly_eval(ints, n) == 0)


def _int_poly_eval(ints: List[int], n: int) -> int:
    acc = 0
    for c in reversed(ints):
        acc = acc * n + c
    return acc


def _eval_poly(coeffs: List[BaseScalar], n0: int, arity: int) -> BaseScalar:
    acc = BaseScalar.zero(arity)
    x = BaseScalar.from_fraction(arity, n0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# pole reduction (rank 1, local) and irregularity classes
# ---------------------------------------------------------------------------

def pole_reduce(dz_part: LaurentSeries, da_parts: List[LaurentSeries], m: int
                ) -> Tuple[Dict[int, BaseScalar], LaurentSeries, List[LaurentSeries]]:
    """Split a closed local one-form as d(tail) + (log-pole remainder).

    dz_part / da_parts are scalar Laurent series in the local coordinate.
    Returns (tail coefficients {n: c_n} for sum c_n z^-n, remainder dz part,
    remainder da parts).  Raises NonClosedError when the input is not closed
    to the stored truncation order.
    """
    arity = dz_part.zero.arity
    _check_closed(dz_part, da_parts)
    tail: Dict[int, BaseScalar] = {}
    cur_dz = dz_part
    cur_da = list(da_parts)
    order = max((-cur_dz.valuation() if cur_dz.coeffs else 0) - 1, 0)
    if order + 1 > m and m >= 1:
        raise InputError(f"pole order {order + 1} exceeds the declared bound {m}")
    for n in range(order, 0, -1):
        a = cur_dz.coeff(-(n + 1))
        if a.is_zero():
            c = None
        else:
            c = a * Fraction(-1, n)
            tail[n] = c
        if c is not None:
            # subtract d(c z^-n) = -n c z^(-n-1) dz + (dc/da_j) z^-n da_j
            cur_dz = cur_dz + LaurentSeries.monomial(c * n, -(n + 1), cur_dz.trunc,
                                                     cur_dz.zero)
            for j in range(arity):
                cur_da[j] = cur_da[j] - LaurentSeries.monomial(
                    c.partial(j), -n, cur_da[j].trunc, cur_da[j].zero)
        # closedness forces the da coefficients at z^-n to vanish now
        for j in range(arity):
            obstruction = cur_da[j].coeff(-n)
            if not obstruction.is_zero():
                raise NonClosedError(
                    f"da_{j+1} coefficient at z^-{n} does not vanish after reduction",
                    obstruction)
    return tail, cur_dz, cur_da


def _check_closed(dz_part: LaurentSeries, da_parts: List[LaurentSeries]) -> None:
    """Mixed closedness d(dzary)/da_j = d(da_j)/dz to the common window."""
    arity = dz_part.zero.arity
    for j in range(arity):
        lhs = dz_part.map_coeffs(lambda c, j=j: c.partial(j), dz_part.zero)
        rhs = da_parts[j].derivative()
        diff = lhs - rhs
        if not diff.is_zero():
            raise NonClosedError(
                f"form is not closed: mixed obstruction in direction a{j+1}",
                diff.coeff(diff.valuation()))
    for i in range(arity):
        for j in range(i + 1, arity):
            lhs = da_parts[j].map_coeffs(lambda c, i=i: c.partial(i), dz_part.zero)
            rhs = da_parts[i].map_coeffs(lambda c, j=j: c.partial(j), dz_part.zero)
            diff = lhs - rhs
            if not diff.is_zero():
                raise NonClosedError(
                    f"form is not closed: da{i+1}^da{j+1} obstruction",
                    diff.coeff(diff.valuation()))


def irregularity_class(conn: Connection) -> List[PrincipalPart]:
    """Per singular point, the polar tail of a local primitive (rank 1 only)."""
    if conn.rank != 1:
        raise PreconditionError("irregularity_class", "rank 1")
    if not curvature(conn).is_vertical:
        raise PreconditionError("irregularity_class", "vertical curvature")
    out = []
    for p in conn.profile.singular_points():
        m = p.order
        order = 2 * m + 2
        M, Ns = local_chart_series(conn, p.point, order)
        dz = M.map_coeffs(lambda mat: mat[0, 0], BaseScalar.zero(conn.arity))
        das = [N.map_coeffs(lambda mat: mat[0, 0], BaseScalar.zero(conn.arity)) for N in Ns]
        tail, _, _ = pole_reduce(dz, das, m)
        out.append(PrincipalPart(p.point, tail))
    return out


# ---------------------------------------------------------------------------
# gauge transformations and direct sums (used by invariance tests)
# ---------------------------------------------------------------------------

def gauge_transform(conn: Connection, S: Matrix) -> Connection:
    """Change of basis v -> S v: A' = S A S^-1 + dS S^-1.

    S is a matrix of CurveFunctions whose determinant is a nonzero constant
    (so no new poles appear).
    """
    det = S.det()
    if det.is_zero():
        raise InputError("gauge matrix is singular")
    S_inv = S.inv()
    a_t = S * conn.a_t * S_inv + S.map(lambda f: f.derivative()) * S_inv
    a_par = []
    for j in range(conn.arity):
        dS = S.map(lambda f, j=j: f.d_base()[j])
        a_par.append(S * conn.a_par[j] * S_inv + dS * S_inv)
    return make_connection(conn.rank, conn.finite_poles, a_t, a_par)


def direct_sum(c1: Connection, c2: Connection) -> Connection:
    if c1.arity != c2.arity:
        raise InputError("direct sum needs matching parameter spaces")
    arity = c1.arity
    zero = CurveFunction.zero(arity)
    r = c1.rank + c2.rank

    def block(m1: Matrix, m2: Matrix) -> Matrix:
        rows = []
        for i in range(r):
            row = []
            for j in range(r):
                if i < c1.rank and j < c1.rank:
                    row.append(m1[i, j])
                elif i >= c1.rank and j >= c1.rank:
                    row.append(m2[i - c1.rank, j - c1.rank])
                else:
                    row.append(zero)
            rows.append(row)
        return Matrix(rows)

    poles = list(c1.finite_poles)
    for e in c2.finite_poles:
        if not any(e == p for p in poles):
            poles.append(e)
    return make_connection(r, poles, block(c1.a_t, c2.a_t),
                           [block(a, b) for a, b in zip(c1.a_par, c2.a_par)])


def exponential_connection(f: CurvePolynomial) -> Connection:
    """d + df on the trivial line bundle over the affine line."""
    arity = f.arity
    a_t = Matrix([[CurveFunction(f.derivative())]])
    a_par = [Matrix([[CurveFunction(p)]]) for p in f.d_base()]
    return make_connection(1, [], a_t, a_par)
