"""Relative de Rham cohomology of a connection on U and its Gauss-Manin matrix.

H^1 is presented by monomial classes: polynomial degrees 0..m_inf-3 at
infinity and pole orders 1..m_e at each finite singular point, each tensored
with the coordinate vectors.  The reduction rewrites everything else by
leading-term elimination against relations nabla(t^j u) dt == 0 and
nabla((t-e)^-j u) dt == 0, by descending degree at infinity and descending
pole order at the finite points; when the pole at infinity is at most
logarithmic the leftover constant relations are eliminated by exact row
reduction at the end.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .connection import Connection, curvature, local_data
from .errors import InputError, InternalError, PreconditionError
from .kernel import (
    INFINITY,
    BaseOneForm,
    BaseScalar,
    CurveFunction,
    CurvePolynomial,
    Matrix,
    is_infinity,
    laurent_expand,
    render_point,
)
from .linalg import rref, solve, nullspace

Vector = List[CurveFunction]


@dataclass
class Slot:
    """One raw basis class: monomial at a point tensored with a unit vector."""
    point_index: int        # -1 for infinity
    exponent: int           # polynomial degree at infinity, pole order k at e
    component: int

    def function(self, conn: Connection) -> CurveFunction:
        arity = conn.arity
        if self.point_index < 0:
            return CurveFunction(CurvePolynomial(
                arity,
                [BaseScalar.zero(arity)] * self.exponent + [BaseScalar.one(arity)]))
        e = conn.finite_poles[self.point_index]
        lin = CurvePolynomial(arity, [-e, BaseScalar.one(arity)])
        return CurveFunction(CurvePolynomial.from_fraction(arity, 1), lin ** self.exponent,
                             reduce=False)


class CohomologyPresentation:
    """Basis of H^1 plus a total reduction map onto its coordinates."""

    def __init__(self, conn: Connection, max_passes: Optional[int] = None):
        self.conn = conn
        self.arity = conn.arity
        self.rank = conn.rank
        self.m_inf = conn.profile.order_at(INFINITY)
        self._max_passes = max_passes
        self._setup_leading_data()
        self._setup_slots()
        self._setup_constant_relations()

    # -- construction -------------------------------------------------------
    def _setup_leading_data(self):
        conn = self.conn
        arity = self.arity
        r = self.rank
        one = BaseScalar.one(arity)
        zero = BaseScalar.zero(arity)
        self._ident = Matrix.identity(r, one, zero)
        # polynomial part of A_t and its leading coefficient matrix
        self._at_poly = [[f.poly_and_proper()[0] for f in row] for row in conn.a_t.data]
        if self.m_inf >= 2:
            d = self.m_inf - 2
            C = Matrix([[self._at_poly[i][j].coeff(d) for j in range(r)] for i in range(r)])
            if C.det().is_zero():
                raise InternalError(
                    "leading coefficient matrix at infinity is singular "
                    "(signals a minimality violation)")
            self._cd_inv = C.inv()
        elif self.m_inf == 1:
            ld = local_data(conn, INFINITY)
            self._g0_inf = ld.g0
        self._finite_leading: List[Matrix] = []
        for idx, e in enumerate(conn.finite_poles):
            m = conn.profile.order_at(e)
            G = Matrix([[laurent_expand(f, e, -m).coeff(-m) for f in row]
                        for row in conn.a_t.data])
            self._finite_leading.append(G)
            if m >= 2 and G.det().is_zero():
                raise InternalError(
                    f"leading coefficient at {e.render()} is singular "
                    "(signals a minimality violation)")

    def _setup_slots(self):
        self.slots: List[Slot] = []
        if self.m_inf >= 3:
            for j in range(self.m_inf - 2):
                for i in range(self.rank):
                    self.slots.append(Slot(-1, j, i))
        for idx, e in enumerate(self.conn.finite_poles):
            m = self.conn.profile.order_at(e)
            for kk in range(1, m + 1):
                for i in range(self.rank):
                    self.slots.append(Slot(idx, kk, i))
        self.raw_dim = len(self.slots)

    def _setup_constant_relations(self):
        """When infinity carries at most a log pole the constant sections give
        relations among the raw classes; eliminate them by row reduction."""
        self._pivot_rows: List[Tuple[int, List[BaseScalar]]] = []
        self._dropped: List[int] = []
        if self.m_inf >= 2:
            self.dimension = self.raw_dim
            self.basis_slots = list(self.slots)
            return
        rows = []
        unit_vectors = []
        for l in range(self.rank):
            u = [CurveFunction.zero(self.arity) for _ in range(self.rank)]
            u[l] = CurveFunction.from_fraction(self.arity, 1)
            unit_vectors.append(u)
        for u in unit_vectors:
            w = self._apply_relative(u)
            rows.append(self._raw_coordinates(w))
        red, pivots = rref(rows)
        self._pivot_rows = [(p, red[i]) for i, p in enumerate(pivots)]
        self._dropped = list(pivots)
        self.basis_slots = [s for i, s in enumerate(self.slots) if i not in pivots]
        self.dimension = len(self.basis_slots)

    # -- the reduction --------------------------------------------------------
    def _apply_relative(self, v: Vector) -> Vector:
        """nabla_{/K}(v) dt-coefficient: dv/dt + A_t v."""
        out = []
        for i in range(self.rank):
            acc = v[i].derivative()
            for j in range(self.rank):
                acc = acc + self.conn.a_t[i, j] * v[j]
            out.append(acc)
        return out

    def reduce(self, v: Vector) -> List[BaseScalar]:
        """Coordinates of the class of v dt in the basis; total on admissible v."""
        if len(v) != self.rank:
            raise InputError("vector length does not match the rank")
        work = list(v)
        limit = self._max_passes or (self.conn.profile.total_order() + self.dimension + 4)
        for _ in range(limit):
            progress = False
            work, p1 = self._reduce_at_infinity(work)
            work, p2 = self._reduce_at_finite(work)
            progress = p1 or p2
            if not self._exceeds_thresholds(work):
                coords = self._raw_coordinates(work)
                return self._apply_constant_relations(coords)
            if not progress:
                break
        raise InternalError("reduction did not stabilize within the pass limit")

    def _poly_parts(self, v: Vector) -> List[CurvePolynomial]:
        return [f.poly_and_proper()[0] for f in v]

    def _reduce_at_infinity(self, v: Vector) -> Tuple[Vector, bool]:
        progress = False
        arity = self.arity
        while True:
            polys = self._poly_parts(v)
            deg = max((p.degree() for p in polys), default=-1)
            threshold = max(self.m_inf - 2, 0)
            if deg < threshold or deg < 0:
                return v, progress
            w = [p.coeff(deg) for p in polys]
            if self.m_inf >= 2:
                u = self._mat_vec(self._cd_inv, w)
                j = deg - (self.m_inf - 2)
            elif self.m_inf == 1:
                shift = self._g0_inf.scale(BaseScalar.from_fraction(arity, -1)) + \
                    self._ident.scale(BaseScalar.from_fraction(arity, deg + 1))
                u = self._mat_vec(shift.inv(), w)
                j = deg + 1
            else:
                u = [x * Fraction(1, deg + 1) for x in w]
                j = deg + 1
            mono = CurvePolynomial(arity, [BaseScalar.zero(arity)] * j + [BaseScalar.one(arity)])
            gen = [CurveFunction(mono) * x for x in u]
            v = [f - g for f, g in zip(v, self._apply_relative(gen))]
            progress = True

    def _reduce_at_finite(self, v: Vector) -> Tuple[Vector, bool]:
        progress = False
        arity = self.arity
        for idx, e in enumerate(self.conn.finite_poles):
            m = self.conn.profile.order_at(e)
            G = self._finite_leading[idx]
            lin = CurvePolynomial(arity, [-e, BaseScalar.one(arity)])
            while True:
                orders = []
                coeffs = []
                worst = 0
                for f in v:
                    if f.is_zero():
                        orders.append(0)
                        continue
                    s = laurent_expand(f, e, -1)
                    o = -s.valuation() if s.coeffs else 0
                    orders.append(max(o, 0))
                    worst = max(worst, max(o, 0))
                if worst <= m:
                    break
                w = []
                for f in v:
                    s = laurent_expand(f, e, -worst)
                    w.append(s.coeff(-worst))
                if m >= 2:
                    u = self._mat_vec(G.inv(), w)
                    j = worst - m
                else:
                    shift = G - self._ident.scale(BaseScalar.from_fraction(arity, worst - 1))
                    u = self._mat_vec(shift.inv(), w)
                    j = worst - 1
                gen = [CurveFunction(CurvePolynomial.const(x), lin ** j, reduce=False)
                       for x in u]
                v = [f - g for f, g in zip(v, self._apply_relative(gen))]
                progress = True
        return v, progress

    def _mat_vec(self, M: Matrix, w: List[BaseScalar]) -> List[BaseScalar]:
        return [sum((M[i, j] * w[j] for j in range(len(w))),
                    BaseScalar.zero(self.arity)) for i in range(M.rows)]

    def _exceeds_thresholds(self, v: Vector) -> bool:
        polys = self._poly_parts(v)
        deg = max((p.degree() for p in polys), default=-1)
        if self.m_inf >= 2 and deg > self.m_inf - 3:
            return True
        if self.m_inf <= 1 and deg >= 0:
            return True
        for e in self.conn.finite_poles:
            m = self.conn.profile.order_at(e)
            for f in v:
                if f.is_zero():
                    continue
                s = laurent_expand(f, e, -1)
                if s.coeffs and -s.valuation() > m:
                    return True
        return False

    def _raw_coordinates(self, v: Vector) -> List[BaseScalar]:
        arity = self.arity
        coords = [BaseScalar.zero(arity)] * self.raw_dim
        residual = list(v)
        polys = self._poly_parts(v)
        for i, slot in enumerate(self.slots):
            if slot.point_index < 0:
                coords[i] = polys[slot.component].coeff(slot.exponent)
            else:
                e = self.conn.finite_poles[slot.point_index]
                s = laurent_expand(v[slot.component], e, -1)
                coords[i] = s.coeff(-slot.exponent)
        # exactness: what remains after removing all recognized parts must vanish
        for i, slot in enumerate(self.slots):
            if coords[i].is_zero():
                continue
            mono = slot.function(self.conn)
            residual[slot.component] = residual[slot.component] - mono * coords[i]
        for f in residual:
            if not f.is_zero():
                raise InputError(
                    "form has a pole outside the singular support of the connection "
                    f"(residual {f.render()})")
        return coords

    def _apply_constant_relations(self, coords: List[BaseScalar]) -> List[BaseScalar]:
        if not self._pivot_rows:
            return list(coords)
        out = list(coords)
        for p, row in self._pivot_rows:
            c = out[p]
            if c.is_zero():
                continue
            for q in range(self.raw_dim):
                if q == p:
                    continue
                if not row[q].is_zero():
                    out[q] = out[q] - c * row[q]
            out[p] = BaseScalar.zero(self.arity)
        return [out[i] for i in range(self.raw_dim) if i not in self._dropped]

    def basis_functions(self) -> List[Vector]:
        out = []
        for slot in self.basis_slots:
            vec = [CurveFunction.zero(self.arity) for _ in range(self.rank)]
            vec[slot.component] = slot.function(self.conn)
            out.append(vec)
        return out

    def final_coordinates(self, coords_raw: List[BaseScalar]) -> List[BaseScalar]:
        return self._apply_constant_relations(coords_raw)


# ---------------------------------------------------------------------------
# H^0
# ---------------------------------------------------------------------------

def h0(conn: Connection, degree_bound: Optional[int] = None) -> List[Vector]:
    """Basis of flat sections with denominators supported on the finite poles.

    Irregular points with invertible leading term force H^0 = 0 by the
    leading-term argument; otherwise a bounded-degree exact linear solve runs
    (heuristic bound r(sum m_i + 2), cross-checked downstream by the Euler
    characteristic).
    """
    arity = conn.arity
    for p in conn.profile.singular_points():
        if p.order >= 2:
            if conn.rank == 1:
                return []
            ld = local_data(conn, p.point)
            if not ld.det_g0.is_zero():
                return []
    B = degree_bound if degree_bound is not None else conn.rank * (conn.profile.total_order() + 2)
    den = CurvePolynomial.from_fraction(arity, 1)
    for e in conn.finite_poles:
        lin = CurvePolynomial(arity, [-e, BaseScalar.one(arity)])
        den = den * lin**B
    N = B + den.degree()
    # v = W/den: condition W' den - W den' + den A_t W = 0 (cleared of A_t denominators)
    at_den = CurvePolynomial.from_fraction(arity, 1)
    for row in conn.a_t.data:
        for f in row:
            if f.den.degree() > 0:
                at_den = at_den * f.den
    rows_by_degree: Dict[Tuple[int, int], Dict[Tuple[int, int], BaseScalar]] = {}

    def add(eq_comp: int, eq_deg: int, var: Tuple[int, int], c: BaseScalar):
        if c.is_zero():
            return
        key = (eq_comp, eq_deg)
        row = rows_by_degree.setdefault(key, {})
        row[var] = row.get(var, BaseScalar.zero(arity)) + c

    den_p = den.derivative()
    at_polys = [[(conn.a_t[i, j] * CurveFunction(den * at_den)).as_polynomial()
                 if (conn.a_t[i, j] * CurveFunction(den * at_den)).is_polynomial()
                 else None
                 for j in range(conn.rank)] for i in range(conn.rank)]
    for i in range(conn.rank):
        for j in range(conn.rank):
            if at_polys[i][j] is None:
                raise InternalError("A_t pole outside declared support in h0")
    den_at = den * at_den
    den_p_at = den_p * at_den
    for vcomp in range(conn.rank):
        for d in range(N + 1):
            # d/dt part: d * t^(d-1) convolved with den_at, into equation component vcomp
            if d >= 1:
                for s in range(den_at.degree() + 1):
                    add(vcomp, d - 1 + s, (vcomp, d), den_at.coeff(s) * d)
            for s in range(den_p_at.degree() + 1):
                add(vcomp, d + s, (vcomp, d), -den_p_at.coeff(s))
    for i in range(conn.rank):
        for j in range(conn.rank):
            p = at_polys[i][j]
            for d in range(N + 1):
                for s in range(p.degree() + 1):
                    add(i, d + s, (j, d), p.coeff(s))
    variables = [(c, d) for c in range(conn.rank) for d in range(N + 1)]
    var_index = {v: i for i, v in enumerate(variables)}
    rows = []
    for key in sorted(rows_by_degree):
        row = [BaseScalar.zero(arity)] * len(variables)
        for var, c in rows_by_degree[key].items():
            row[var_index[var]] = c
        rows.append(row)
    kernel = nullspace(rows, len(variables), arity)
    out: List[Vector] = []
    for vec in kernel:
        comps = []
        for c in range(conn.rank):
            coeffs = [vec[var_index[(c, d)]] for d in range(N + 1)]
            comps.append(CurveFunction(CurvePolynomial(arity, coeffs), den))
        out.append(comps)
    return out


# ---------------------------------------------------------------------------
# Gauss-Manin
# ---------------------------------------------------------------------------

@dataclass
class GaussManinMatrix:
    psi: List[List[BaseOneForm]]
    det_form: BaseOneForm

    @property
    def dimension(self) -> int:
        return len(self.psi)


def h1_presentation(conn: Connection, max_passes: Optional[int] = None,
                    expected_h0: Optional[int] = None) -> CohomologyPresentation:
    from .connection import euler_characteristic, minimality_check
    pres = CohomologyPresentation(conn, max_passes=max_passes)
    if expected_h0 is None:
        expected_h0 = len(h0(conn))
    chi = euler_characteristic(conn)
    if pres.dimension != -chi + expected_h0:
        raise InternalError(
            f"dimension mismatch: presentation has {pres.dimension}, Euler characteristic "
            f"gives {-chi} with h0 = {expected_h0} (signals a minimality violation); "
            f"verdicts: {[ (render_point(v.point), v.status) for v in minimality_check(conn)]}")
    return pres


def gauss_manin_matrix(conn: Connection, pres: CohomologyPresentation) -> GaussManinMatrix:
    """Psi with GM(basis_b) = sum_g Psi[g][b] (x) basis_g, via lift-apply-project."""
    if not curvature(conn).is_vertical:
        raise PreconditionError("gauss_manin_matrix", "vertical curvature")
    dim = pres.dimension
    arity = conn.arity
    psi: List[List[BaseOneForm]] = [[BaseOneForm.zero(arity) for _ in range(dim)]
                                    for _ in range(dim)]
    for b, vec in enumerate(pres.basis_functions()):
        per_param_coords = []
        for j in range(arity):
            w = []
            for i in range(conn.rank):
                acc = vec[i].d_base()[j]
                for l in range(conn.rank):
                    acc = acc + conn.a_par[j][i, l] * vec[l]
                w.append(acc)
            per_param_coords.append(pres.reduce(w))
        for g in range(dim):
            psi[g][b] = BaseOneForm([per_param_coords[j][g] for j in range(arity)])
    det_form = BaseOneForm.zero(arity)
    for b in range(dim):
        det_form = det_form + psi[b][b]
    return GaussManinMatrix(psi, det_form)


@dataclass
class DetGmResult:
    form: BaseOneForm            # trace on H^1 minus trace on H^0
    h1: GaussManinMatrix
    h0_dim: int
    h1_dim: int
    h0_trace: BaseOneForm


def det_gm(conn: Connection, max_passes: Optional[int] = None) -> DetGmResult:
    """Determinant connection form of the virtual space H^0 - H^1."""
    flat = h0(conn)
    pres = h1_presentation(conn, max_passes=max_passes, expected_h0=len(flat))
    gm = gauss_manin_matrix(conn, pres)
    arity = conn.arity
    h0_trace = BaseOneForm.zero(arity)
    if flat:
        h0_trace = _h0_trace(conn, flat)
    return DetGmResult(gm.det_form - h0_trace, gm, len(flat), pres.dimension, h0_trace)


def _h0_trace(conn: Connection, flat: List[Vector]) -> BaseOneForm:
    """Trace of the Gauss-Manin action on flat sections."""
    arity = conn.arity
    comps = [BaseScalar.zero(arity) for _ in range(arity)]
    for j in range(arity):
        for idx, v in enumerate(flat):
            w = []
            for i in range(conn.rank):
                acc = v[i].d_base()[j]
                for l in range(conn.rank):
                    acc = acc + conn.a_par[j][i, l] * v[l]
                w.append(acc)
            coeffs = _express_in_span(flat, w, arity, conn.rank)
            comps[j] = comps[j] + coeffs[idx]
    return BaseOneForm(comps)


def _express_in_span(vectors: List[Vector], target: Vector, arity: int, rank: int
                     ) -> List[BaseScalar]:
    den = CurvePolynomial.from_fraction(arity, 1)
    for vec in vectors + [target]:
        for f in vec:
            if f.den.degree() > 0:
                den = den * f.den
    den_f = CurveFunction(den)

    def flat_poly(vec: Vector) -> List[CurvePolynomial]:
        out = []
        for f in vec:
            g = f * den_f
            if not g.is_polynomial():
                raise InternalError("span expression failed to clear denominators")
            out.append(g.as_polynomial())
        return out

    cols = [flat_poly(vec) for vec in vectors]
    rhs_p = flat_poly(target)
    max_deg = max([p.degree() for ps in cols + [rhs_p] for p in ps] + [0])
    rows = []
    rhs = []
    for comp in range(rank):
        for d in range(max_deg + 1):
            rows.append([cols[c][comp].coeff(d) for c in range(len(vectors))])
            rhs.append(rhs_p[comp].coeff(d))
    sol = solve(rows, rhs, arity)
    if sol is None:
        raise InternalError("Gauss-Manin image of a flat section left the flat subspace")
    return sol
