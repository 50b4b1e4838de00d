import json
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from spcheck.series import (ONE, U, IntPoly, TruncSeries, build_class_number, build_f0, build_fplus,
                            build_fplus_by_definition, build_gend, build_genfun_c, build_partition,
                            build_theta, coefficient_table, inverse_unit, jacobi_sides,
                            verify_fplus_closed_form, verify_genfun_factorization, verify_jacobi,
                            verify_main_identity)

t, u = sympy.symbols("t u")


def _trunc(expr, N):
    """Drop every t-power above N from a polynomial in t and u."""
    P = sympy.Poly(sympy.expand(expr), t, u)
    return sum(c * t ** i * u ** j for (i, j), c in P.terms() if i <= N)


def _geom(x, N):
    # 1 / (1 - x) through t^N, x a monomial in t and u
    return sum(x ** k for k in range(N + 1))


def _product(factors, N):
    acc = sympy.Integer(1)
    for f in factors:
        acc = _trunc(acc * f, N)
    return acc


def _sympy_coeffs(expr, N):
    poly = sympy.Poly(expr, t, u)
    out = [[0] * (N + 1) for _ in range(N + 1)]
    for (i, j), c in poly.terms():
        out[i][j] = int(c)
    return [IntPoly(row) for row in out]


def test_intpoly_arithmetic():
    a = IntPoly([1, 2])  # 1 + 2u
    b = IntPoly([0, 0, 3])
    assert (a * b).to_list() == [0, 0, 3, 6]
    assert (a - a).is_zero()
    assert a(5) == 11
    assert U.shift(2) == IntPoly.monomial(3)
    assert IntPoly([2, 4]).exact_div(2) == IntPoly([1, 2])
    with pytest.raises(ArithmeticError):
        IntPoly([1, 2]).exact_div(2)
    assert repr(IntPoly([2, 1, 1])) == "u^2 + u + 2"
    assert repr(IntPoly([-1, 0, -3])) == "-3*u^2 - 1"


def test_genfun_low_coefficients():
    g = build_genfun_c(4)
    assert g[0] == ONE
    assert g[1] == U
    assert g[2] == IntPoly([2, 1, 1])


def test_gend_low_coefficients():
    d = build_gend(4)
    assert d[0] == ONE and d[1] == U and d[2] == IntPoly([2, 1, 1])


def test_builders_against_sympy():
    N = 7
    geo_u = [_geom(u * t ** i, N) for i in range(1, N + 1)]
    geo_1 = [_geom(t ** i, N) for i in range(1, N + 1)]
    geo_2 = [_geom(t ** (2 * i), N) for i in range(1, N + 1)]
    rng_i = range(1, N + 1)
    theta = sum(t ** (j * j + j) for j in range(4))
    genfun = _product([(1 + t ** (2 * i)) ** 2 for i in rng_i] + geo_u, N)
    f0 = _product([(1 - t ** i) ** 2 for i in rng_i] + geo_u, N)
    fplus = _product([1 + t ** (2 * i) for i in rng_i] + geo_1, N)
    gend = _product([theta] + geo_u + geo_2, N)
    classes = _product([(1 + t ** i) ** 4 for i in rng_i] + geo_u, N)
    assert build_genfun_c(N).coeffs == _sympy_coeffs(genfun, N)
    assert build_f0(N).coeffs == _sympy_coeffs(f0, N)
    assert build_fplus(N).coeffs == _sympy_coeffs(fplus, N)
    assert build_gend(N).coeffs == _sympy_coeffs(gend, N)
    assert build_class_number(N).coeffs == _sympy_coeffs(classes, N)


def test_partition_and_theta():
    p = build_partition(10)
    assert [p[n](0) for n in range(11)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
    assert [build_theta(12)[n](0) for n in range(13)] == [1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1]


def test_fplus_definition_value():
    # partitions of 2: (2) weighs 2^1, (1,1) weighs 2^0
    assert build_fplus_by_definition(6)[2] == IntPoly([3])
    assert build_fplus(6)[2] == IntPoly([3])
    assert build_f0(3)[0] == ONE


def test_class_number_series_known_values():
    w = build_class_number(3)
    # Sp_2(3), Sp_4(3), Sp_6(3) have 7, 34, 141 classes
    assert [w[n](3) for n in (1, 2, 3)] == [7, 34, 141]


def test_identities_through_40():
    assert verify_genfun_factorization(40).ok
    assert verify_fplus_closed_form(40).ok


def test_main_identity_and_jacobi():
    rep = verify_main_identity(30)
    assert rep.ok and rep.first_mismatch is None
    assert verify_jacobi(10).ok
    assert verify_jacobi(60).ok


@pytest.mark.parametrize("k", [1, 3, 7])
def test_jacobi_negative_control(k):
    rep = verify_jacobi(30, perturb=k)
    assert not rep.ok
    assert rep.first_mismatch == 2 * k
    idx, lhs, rhs = rep.mismatches[0]
    assert lhs != rhs
    lhs_s, rhs_s = jacobi_sides(30, perturb=k)
    assert lhs_s[idx] == lhs and rhs_s[idx] == rhs


def _random_series(rng, N):
    return TruncSeries(N, [IntPoly([rng.randint(-3, 3) for _ in range(rng.randint(0, 3))])
                           for _ in range(N + 1)])


def test_ring_axioms_randomized():
    rng = random.Random(40)
    N = 40
    for _ in range(5):
        a, b, c = (_random_series(rng, N) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert a + (-a) == TruncSeries(N)
        assert a * TruncSeries.one(N) == a


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=12))
@settings(max_examples=60, deadline=None)
def test_inverse_unit_property(tail):
    N = len(tail)
    s = TruncSeries(N, [ONE] + [IntPoly([x, -x]) for x in tail])
    assert s * inverse_unit(s) == TruncSeries.one(N)


def test_sparse_binomial_ops_match_products():
    N = 15
    rng = random.Random(3)
    a = _random_series(rng, N)
    k = 3
    binom = TruncSeries(N, [ONE] + [IntPoly()] * (k - 1) + [U])  # 1 + u t^3
    assert a.times_binomial(k, U) == a * binom
    assert a.over_binomial(k, -U) * binom == a
    assert a.times_binomial(2, ONE, 3) == a * TruncSeries(N, [1, 0, 3, 0, 3, 0, 1])


def test_truncation_orders_must_agree():
    with pytest.raises(ValueError):
        TruncSeries.one(3) * TruncSeries.one(4)
    with pytest.raises(ValueError):
        TruncSeries(-1)


def test_json_tables():
    g = build_genfun_c(2)
    assert json.loads(g.to_json()) == {"order": 2, "coefficients": {"0": [1], "1": [0, 1], "2": [2, 1, 1]}}
    assert coefficient_table(g)[2] == {"n": 2, "coefficient": [2, 1, 1]}


def test_substitute_power_and_evaluate():
    p = build_partition(6).substitute_power(2)
    assert [c(0) for c in p.coeffs] == [1, 0, 1, 0, 2, 0, 3]
    assert build_genfun_c(2).evaluate(3) == [1, 3, 14]
