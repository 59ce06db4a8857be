"""H^0/H^1 presentations, reduction identities, Gauss-Manin matrices."""
from fractions import Fraction
import random

import pytest

from gmdet.connection import (
    direct_sum,
    euler_characteristic,
    exponential_connection,
    gauge_transform,
    make_connection,
)
from gmdet.derham import det_gm, gauss_manin_matrix, h0, h1_presentation
from gmdet.errors import InputError
from gmdet.kernel import (
    BaseOneForm,
    BaseScalar,
    CurveFunction,
    CurvePolynomial,
    Matrix,
    exterior_d,
)
from helpers import fun, fun_matrix, params, poly_t, rat


def exp_conn(k, *fcoeffs):
    return exponential_connection(poly_t(k, 0, *fcoeffs))


def test_h0_vanishing_for_exponential():
    k = 2
    a1, a2 = params(k)
    assert h0(exp_conn(k, a1, a2)) == []
    assert h0(exp_conn(k, a1)) == []


def test_h0_trivial_connection():
    k = 1
    conn = make_connection(1, [], fun_matrix(k, [[0]]), [fun_matrix(k, [[0]])])
    basis = h0(conn)
    assert len(basis) == 1


def test_h0_regular_singular_half_exponent():
    k = 1
    c0 = rat(k, Fraction(1, 2))
    at = fun_matrix(k, [[fun(poly_t(k, c0), poly_t(k, 0, 1))]])
    conn = make_connection(1, [rat(k, 0)], at, [fun_matrix(k, [[0]])])
    assert h0(conn) == []


def test_h0_integer_exponent_has_flat_section():
    # A_t = -1/(t - e): flat section (t - e)
    k = 1
    e = rat(k, 2)
    at = fun_matrix(k, [[fun(poly_t(k, -1), poly_t(k, -e, 1))]])
    conn = make_connection(1, [e], at, [fun_matrix(k, [[0]])])
    basis = h0(conn)
    assert len(basis) == 1
    v = basis[0][0]
    assert (v.derivative() + at[0, 0] * v).is_zero()


def test_h1_dimension_exponential():
    k = 2
    a1, a2 = params(k)
    pres = h1_presentation(exp_conn(k, a1, a2))
    assert pres.dimension == 1
    pres = h1_presentation(exp_conn(k, a1))
    assert pres.dimension == 0


def test_reduction_identities_worked_example():
    """f = a1 t + a2 t^2: t dt == -(a1/2a2) dt and t^2 dt == (a1^2/4a2^2 - 1/2a2) dt."""
    k = 2
    a1, a2 = params(k)
    conn = exp_conn(k, a1, a2)
    pres = h1_presentation(conn)
    c1 = pres.reduce([CurveFunction.t(k)])
    assert len(c1) == 1
    assert c1[0] == -(a1 / (2 * a2))
    c2 = pres.reduce([CurveFunction.t(k) * CurveFunction.t(k)])
    assert c2[0] == a1 ** 2 / (4 * a2 ** 2) - 1 / (2 * a2)


def test_reduction_idempotence_and_exactness():
    rng = random.Random(31)
    k = 2
    a1, a2 = params(k)
    conn = exp_conn(k, a1, a2)
    pres = h1_presentation(conn)
    basis = pres.basis_functions()
    for _ in range(10):
        # exactness: the class of nabla(v) dt vanishes for polynomial v
        coeffs = [rat(k, rng.randint(-4, 4)) for _ in range(rng.randint(1, 7))]
        v = CurveFunction(CurvePolynomial(k, coeffs))
        w = v.derivative() + conn.a_t[0, 0] * v
        out = pres.reduce([w])
        assert all(c.is_zero() for c in out)
        # idempotence: reduce of a basis combination returns the coefficients
        x = rat(k, rng.randint(-3, 3))
        combo = [basis[0][0] * x]
        assert pres.reduce(combo)[0] == x


def test_rank2_constant_leading_dimension():
    k = 1
    C0 = fun_matrix(k, [[1, 2], [0, 3]])
    C1 = fun_matrix(k, [[2, 0], [1, 1]])
    t = CurveFunction.t(k)
    at = C0 + C1.map(lambda f: f * t)
    conn = make_connection(2, [], at, [fun_matrix(k, [[0, 0], [0, 0]])])
    pres = h1_presentation(conn)
    assert pres.dimension == 2
    assert euler_characteristic(conn) == -2


def test_gm_worked_example():
    k = 2
    a1, a2 = params(k)
    conn = exp_conn(k, a1, a2)
    pres = h1_presentation(conn)
    gm = gauss_manin_matrix(conn, pres)
    expected = BaseOneForm([-(a1 / (2 * a2)), a1 ** 2 / (4 * a2 ** 2) - 1 / (2 * a2)])
    assert gm.det_form == expected
    res = det_gm(conn)
    assert res.form == expected
    assert res.h0_dim == 0 and res.h1_dim == 1


def test_gm_m2_zero():
    k = 2
    a1, a2 = params(k)
    res = det_gm(exp_conn(k, a1))
    assert res.form.is_zero()
    assert res.h1_dim == 0


def test_gm_flatness():
    k = 2
    a1, a2 = params(k)
    res = det_gm(exp_conn(k, a1, a2))
    assert exterior_d(res.form).is_zero()


def test_gm_direct_sum_block_and_additive():
    k = 2
    a1, a2 = params(k)
    c1 = exp_conn(k, a1, a2)
    c2 = exp_conn(k, 1 + a1, 2 * a2)
    s = direct_sum(c1, c2)
    r1 = det_gm(c1)
    r2 = det_gm(c2)
    rs = det_gm(s)
    assert rs.form == r1.form + r2.form


def test_gm_gauge_invariance_constant():
    k = 2
    a1, a2 = params(k)
    c1 = exp_conn(k, a1, a2)
    c2 = exp_conn(k, 1 + a1, a2)  # same leading coefficient a2
    s = direct_sum(c1, c2)
    S = fun_matrix(k, [[1, 2], [1, 3]])
    gauged = gauge_transform(s, S)
    assert det_gm(gauged).form == det_gm(s).form


def test_gm_gauge_invariance_unipotent_polynomial():
    k = 2
    a1, a2 = params(k)
    c1 = exp_conn(k, a1, a2)
    c2 = exp_conn(k, 1 + a1, a2)
    s = direct_sum(c1, c2)
    t = CurveFunction.t(k)
    U = fun_matrix(k, [[1, 0], [0, 1]])
    U = Matrix([[U[0, 0], t], [U[1, 0], U[1, 1]]])  # [[1, t], [0, 1]]
    gauged = gauge_transform(s, U)
    assert det_gm(gauged).form == det_gm(s).form


def test_gm_base_change_specialization_commutes():
    k = 2
    a1, a2 = params(k)
    conn = exp_conn(k, a1, a2)
    form = det_gm(conn).form
    # specialize a1 -> 3 in the connection (the da1 direction is dropped)
    at = conn.a_t.map(lambda f: f.subs_param(0, Fraction(3)))
    ap = [m.map(lambda f: f.subs_param(0, Fraction(3))) for m in conn.a_par]
    ap[0] = fun_matrix(k, [[0]])
    conn_s = make_connection(1, [], at, ap)
    form_s = det_gm(conn_s).form
    assert form_s == form.subs_param(0, Fraction(3))


def test_reduce_rejects_undeclared_pole():
    k = 2
    a1, a2 = params(k)
    conn = exp_conn(k, a1, a2)
    pres = h1_presentation(conn)
    bad = CurveFunction(poly_t(k, 1), poly_t(k, -1, 1))  # pole at t=1 undeclared
    with pytest.raises(InputError):
        pres.reduce([bad])


def test_h1_with_finite_log_pole():
    """Regular-singular pole (exponent 1/2) plus irregular infinity."""
    k = 2
    a1, a2 = params(k)
    half = rat(k, Fraction(1, 2))
    at = fun_matrix(k, [[fun(poly_t(k, half), poly_t(k, -a2, 1)) + fun(poly_t(k, a1))]])
    # absolute connection d + a1 dt + (1/2) dlog(t - a2): da1 part t, da2 part -1/2/(t-a2)
    ap1 = fun_matrix(k, [[poly_t(k, 0, 1)]])
    ap2 = fun_matrix(k, [[fun(poly_t(k, -half), poly_t(k, -a2, 1))]])
    conn = make_connection(1, [a2], at, [ap1, ap2])
    assert euler_characteristic(conn) == -1
    pres = h1_presentation(conn)
    assert pres.dimension == 1
    gm = gauss_manin_matrix(conn, pres)
    assert exterior_d(gm.det_form).is_zero()
