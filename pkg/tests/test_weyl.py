import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from spcheck.weyl.monomial import (MonomialMat, chevalley_h, chevalley_n, is_symplectic_int, reflect,
                                   roots, simple_roots)
from spcheck.weyl.signed import SignedPerm, all_signed_perms, centralizer_in_W, torus_fixed_order, weyl_order
from spcheck.weyl.twist import (TwistSpec, bar_orbits, coxeter_image, coxeter_v0, enumerate_V,
                                extended_weyl_checks, regular_numbers, sylow_twist, target_c1,
                                twist_setting_checks, v_order)
from spcheck.weyl.wreath import (brute_stabilizer, check_mu, factor_action, formula_order,
                                 involution_is_inversion, normalizer_check, shape_of,
                                 stabilizer_grid, stabilizer_shape, wreath_act, wreath_elements,
                                 wreath_inverse, wreath_mu, wreath_mul)


def signed_perms(max_l=5):
    return st.integers(1, max_l).flatmap(
        lambda l: st.tuples(st.permutations(range(1, l + 1)), st.lists(st.sampled_from([1, -1]),
                                                                        min_size=l, max_size=l))
    ).map(lambda ps: SignedPerm(tuple(s * x for s, x in zip(ps[1], ps[0]))))


# -- signed permutations -------------------------------------------------------

@given(signed_perms(), st.data())
@settings(max_examples=200, deadline=None)
def test_signed_perm_group_laws(a, data):
    l = a.l
    perm = data.draw(st.permutations(range(1, l + 1)))
    b = SignedPerm(tuple(perm))
    ident = SignedPerm.identity(l)
    assert a * a.inverse() == ident == a.inverse() * a
    assert (a * b).inverse() == b.inverse() * a.inverse()
    for i in range(1, l + 1):
        assert (a * b)(i) == a(b(i))
        assert a(-i) == -a(i)
    assert a ** a.order() == ident
    M = [[sum(x * y for x, y in zip(row, col)) for col in zip(*b.matrix())] for row in a.matrix()]
    assert M == (a * b).matrix()


def test_from_cycles_and_cycles():
    w = SignedPerm.from_cycles(2, [[1, 2, -1, -2]])
    assert w.images == (2, -1)
    assert w.cycles() == [(1, 2, -1, -2)]
    assert w.order() == 4
    with pytest.raises(ValueError):
        SignedPerm((1, 1))


def _torus_by_cycles(w, q):
    out = 1
    seen = set()
    for i in range(1, w.l + 1):
        if i in seen:
            continue
        k, x = 0, i
        while True:
            seen.add(abs(x))
            x = w(x)
            k += 1
            if abs(x) == i:
                break
        out *= q ** k - 1 if x == i else q ** k + 1
    return out


def test_torus_order_matches_cycle_type():
    for l in range(1, 4):
        for w in all_signed_perms(l):
            for q in (3, 5):
                assert torus_fixed_order(w, q) == _torus_by_cycles(w, q)


@pytest.mark.parametrize("l", range(1, 7))
def test_torus_order_formula_for_twists(l):
    for d in regular_numbers(l):
        spec = TwistSpec(l, d)
        w = sylow_twist(spec).rho()
        for q in (3, 5, 9):
            assert torus_fixed_order(w, q) == spec.torus_order(q)


def test_centralizer_of_central_element():
    w = sylow_twist(TwistSpec(2, 2)).rho()
    assert w == SignedPerm((-1, -2))
    assert len(centralizer_in_W(w)) == 8 == weyl_order(2)


# -- monomial lifts ------------------------------------------------------------

def test_h_for_rank_one():
    assert chevalley_h((2,)).dense() == [[-1, 0], [0, -1]]


@pytest.mark.parametrize("l", range(1, 5))
def test_root_elements_are_symplectic_and_n_reflects(l):
    R = roots(l)
    for a in R:
        for t in (1, -1):
            n = chevalley_n(a, t)
            assert is_symplectic_int(n.dense())
    # conjugation rule: n_b^-1 n_a n_b = n_{s_b(a)}(+-1)
    for a in R:
        na = chevalley_n(a)
        for b in R:
            c = na.conj(chevalley_n(b))
            target = reflect(b, a)
            assert c in (chevalley_n(target, 1), chevalley_n(target, -1))


def test_coxeter_images():
    assert coxeter_v0(1).rho() == SignedPerm((-1,))
    assert coxeter_v0(2).rho() == SignedPerm.from_cycles(2, [[1, 2, -1, -2]])
    assert coxeter_v0(4).rho().order() == 8
    for l in range(1, 6):
        assert coxeter_v0(l).rho() == coxeter_image(l)


def test_sylow_twist_examples():
    v = sylow_twist(TwistSpec(2, 2))
    assert v == coxeter_v0(2) ** 2
    assert v.rho() == SignedPerm.from_cycles(2, [[1, -1], [2, -2]])
    spec = TwistSpec(2, 4)
    assert sylow_twist(spec) == coxeter_v0(2) and (spec.d0, spec.a) == (2, 1)
    assert len(bar_orbits(sylow_twist(spec).rho())) == 1
    nonreg = TwistSpec(3, 4, regular=False)
    assert (nonreg.l_prime, nonreg.a) == (2, 1)
    assert all(twist_setting_checks(nonreg).values())


def test_twist_spec_validation():
    with pytest.raises(ValueError):
        TwistSpec(2, 3)
    with pytest.raises(ValueError):
        TwistSpec(0, 1)
    assert TwistSpec(3, 3).eps == 1 and TwistSpec(3, 6).eps == -1


@pytest.mark.parametrize("l", range(1, 5))
def test_rho_is_a_homomorphism_with_kernel_H(l):
    V = enumerate_V(l)
    assert len(V) == v_order(l)
    H = [x for x in V if x.rho() == SignedPerm.identity(l)]
    assert len(H) == 2 ** l and all(x.is_diagonal() for x in H)
    assert {x.rho() for x in V} == set(all_signed_perms(l))
    rng = random.Random(l)
    for _ in range(500):
        x, y = rng.choice(V), rng.choice(V)
        assert (x * y).rho() == x.rho() * y.rho()
        assert is_symplectic_int((x * y).dense())


def test_monomial_basics():
    x = chevalley_n(simple_roots(3)[0])
    assert MonomialMat.from_dense(x.dense()) == x
    assert x * x.inverse() == MonomialMat.identity(3)
    assert x ** -3 == (x ** 3).inverse()
    with pytest.raises(ValueError):
        MonomialMat.from_dense([[2, 0], [0, 1]])


@pytest.mark.parametrize("l,d", [(2, 2), (3, 2), (4, 4), (3, 3), (2, 1)])
def test_extended_weyl_examples(l, d):
    rep = extended_weyl_checks(TwistSpec(l, d))
    assert rep.ok, {k: v for k, v in rep.checks.items() if not v}
    assert rep.data["Vd_order"] == rep.data["Hd_order"] * rep.data["centralizer_order"]
    if (l, d) == (2, 2):
        assert rep.data["V_order"] == 32
    if (l, d) == (3, 2):
        assert rep.data["a"] == 3


def test_c1_target_for_odd_d_negates_orbit():
    spec = TwistSpec(3, 3)
    c = target_c1(spec)
    assert c.order() == 2 * spec.d0
    w = sylow_twist(spec).rho()
    assert c * w == w * c


# -- wreath products -----------------------------------------------------------

def test_wreath_group_laws():
    f, a = 4, 3
    G = list(wreath_elements(f, a))
    assert len(G) == f ** a * 6
    rng = random.Random(0)
    ident = ((0,) * a, tuple(range(a)))
    for _ in range(300):
        x, y, z = rng.choice(G), rng.choice(G), rng.choice(G)
        assert wreath_mul(f, wreath_mul(f, x, y), z) == wreath_mul(f, x, wreath_mul(f, y, z))
        assert wreath_mul(f, x, wreath_inverse(f, x)) == ident


def test_wreath_action_is_a_left_action():
    spec = TwistSpec(3, 1)
    act = factor_action(spec, 5)
    G = list(wreath_elements(act.order, 3))
    rng = random.Random(1)
    for _ in range(300):
        x, y = rng.choice(G), rng.choice(G)
        xi = tuple(rng.randrange(act.N) for _ in range(3))
        lhs = wreath_act(wreath_mul(act.order, x, y), xi, act.g, act.N)
        rhs = wreath_act(x, wreath_act(y, xi, act.g, act.N), act.g, act.N)
        assert lhs == rhs


def test_factor_group_involution_is_inversion():
    for l in range(1, 6):
        for d in regular_numbers(l):
            for q in (3, 5, 9):
                act = factor_action(TwistSpec(l, d), q)
                assert act.order == 2 * TwistSpec(l, d).d0
                assert involution_is_inversion(act)


def test_stabilizer_examples():
    spec = TwistSpec(2, 2)
    rep = stabilizer_shape(spec, 3, (1, 1))
    assert rep.ok and rep.brute_order == rep.formula_order == 2
    assert len(rep.shape) == 1 and rep.shape[0][1] == 2
    full = stabilizer_shape(spec, 3, (0, 0))
    assert full.brute_order == 2 ** 2 * 2
    free = stabilizer_shape(TwistSpec(2, 1), 9, (1, 2))
    assert free.brute_order == free.formula_order == 1


@given(st.integers(0, 9), st.integers(0, 9), st.integers(0, 9))
@settings(max_examples=100, deadline=None)
def test_stabilizer_formula_property(x, y, z):
    spec = TwistSpec(3, 2)  # a = 3, N = 10 at q = 9
    rep = stabilizer_shape(spec, 9, (x, y, z))
    assert rep.ok


def test_stabilizer_grid_small():
    rep = stabilizer_grid(TwistSpec(2, 1), 5)
    assert rep.ok and rep.tuples == 16


def test_mu_is_a_sign_homomorphism():
    for f in (2, 4, 6):
        for n in (1, 2, 3):
            rep = check_mu(f, n)
            assert rep.ok and rep.trivial_on_top
            # mu sees the parity of the total exponent, so it is never trivial on the base
            assert rep.nontrivial_on_base
    with pytest.raises(ValueError):
        wreath_mu(3, ((1,), (0,)))


@pytest.mark.parametrize("l,d,q", [(2, 1, 5), (2, 2, 3), (2, 4, 3)])
def test_normalizers_small(l, d, q):
    spec = TwistSpec(l, d)
    act = factor_action(spec, q)
    for xi in itertools.product(range(act.N), repeat=spec.a):
        rep = normalizer_check(spec, q, xi)
        assert rep.ok, rep


def test_formula_order_helpers():
    act = factor_action(TwistSpec(2, 1), 5)  # N = 4, multiplier -5 = 3 = -1
    # 0 and 2 are both fixed by -1 but lie in different orbits
    assert shape_of(act, (0, 2)) == [(2, 1), (2, 1)]
    assert len(brute_stabilizer(act, (0, 2))) == formula_order([(2, 1), (2, 1)]) == 4
    assert shape_of(act, (2, 2)) == [(2, 2)]
    assert len(brute_stabilizer(act, (2, 2))) == formula_order([(2, 2)]) == 8
