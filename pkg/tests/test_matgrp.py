import json
import random

import pytest
import sympy

from spcheck._budget import BudgetExceeded
from spcheck.classparams import (AutSpec, WittClass, apply_diagonal, apply_field_aut, enumerate_params,
                                 minus_one_orbit, plus_one_orbit, validate)
from spcheck.gf import field_of_order, poly_powmod
from spcheck.matgrp import (block_diag_D, c_lambda, charpoly, determinant, diagonal_conjugate,
                            enumerate_group, field_power, identity, inverse, is_conformal,
                            is_symplectic, kernel, mat_apply, mat_mul, mat_pow, mat_vec,
                            oracle_class_census, oracle_invariant_count, random_symplectic, rank,
                            scalar, sp_order, standard_generators, symplectic_inverse,
                            wall_params_of)


def _random_matrix(F, N, rng):
    return tuple(tuple(rng.randrange(F.q) for _ in range(N)) for _ in range(N))


def test_linear_algebra_against_sympy():
    F = field_of_order(7)
    rng = random.Random(7)
    for _ in range(50):
        M = _random_matrix(F, 4, rng)
        S = sympy.Matrix(M)
        assert determinant(F, M) == int(S.det()) % 7
        assert (rank(F, M) == 4) == (determinant(F, M) != 0)
        for v in kernel(F, M):
            assert not any(mat_vec(F, M, v))
        assert len(kernel(F, M)) == 4 - rank(F, M)
        if determinant(F, M):
            assert mat_mul(F, M, inverse(F, M)) == identity(F, 4)


@pytest.mark.parametrize("q", [5, 9])
def test_cayley_hamilton(q):
    F = field_of_order(q)
    rng = random.Random(q)
    for _ in range(30):
        M = _random_matrix(F, 4, rng)
        assert mat_apply(F, M, charpoly(F, M)) == scalar(F, 4, 0)


def test_form_examples():
    F = field_of_order(5)
    assert is_symplectic(F, identity(F, 4)) and is_conformal(F, identity(F, 4)) == 1
    for lam in F.nonzero():
        c = c_lambda(F, 2, lam)
        assert is_conformal(F, c) == lam
        assert is_symplectic(F, c) == (lam == 1)
    M = ((1, 1, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    assert is_conformal(F, M) is None


def test_generators_and_inverse():
    for q, n in [(3, 1), (5, 2), (9, 2), (3, 3)]:
        F = field_of_order(q)
        for g in standard_generators(F, n):
            assert is_symplectic(F, g)
            assert mat_mul(F, g, symplectic_inverse(F, g)) == identity(F, 2 * n)


@pytest.mark.parametrize("n,q,order", [(1, 3, 24), (1, 5, 120), (1, 9, 720)])
def test_group_orders(n, q, order):
    assert sp_order(n, q) == order
    assert enumerate_group(n, q).order == order


def test_group_cap():
    assert sp_order(2, 3) == 51840
    with pytest.raises(BudgetExceeded):
        enumerate_group(2, 3, cap=1000)


def test_identity_and_minus_identity():
    for q, n in [(3, 1), (5, 2), (9, 1)]:
        F = field_of_order(q)
        k = wall_params_of(F, identity(F, 2 * n))
        assert k.m == ((plus_one_orbit(F), 1, 2 * n),)
        assert k.psi_plus == () and k.psi_minus == ()
        k = wall_params_of(F, scalar(F, 2 * n, F.neg(1)))
        assert k.m == ((minus_one_orbit(F), 1, 2 * n),)


def _blocks_from_ranks(F, M, P):
    """{size: count} of Jordan blocks for the orbit P, from ranks of P(M)^k."""
    N = len(M)
    base = mat_apply(F, M, P.poly)
    ranks = [N]
    power = identity(F, N)
    while True:
        power = mat_mul(F, power, base)
        ranks.append(rank(F, power))
        if ranks[-1] == ranks[-2]:
            break
    ranks.append(ranks[-1])
    out = {}
    for j in range(1, len(ranks) - 1):
        c = (ranks[j - 1] - 2 * ranks[j] + ranks[j + 1]) // P.size
        if c:
            out[j] = c
    return out


def _check_multiplicities(F, M):
    k = wall_params_of(F, M)
    assert validate(k)
    orbits = {P for P, _, _ in k.m}
    for P in orbits:
        assert _blocks_from_ranks(F, M, P) == {j: c for Q, j, c in k.m if Q == P}
    assert sum(P.size * j * c for P, j, c in k.m) == len(M)


def test_multiplicities_match_rank_sequences():
    for q in (3, 5, 9):
        F = field_of_order(q)
        for g in enumerate_group(1, F).elements:
            _check_multiplicities(F, g)
    F = field_of_order(3)
    rng = random.Random(2)
    for _ in range(300):
        _check_multiplicities(F, random_symplectic(F, 2, rng))


@pytest.mark.parametrize("n,q,keys", [(1, 3, 7), (1, 5, 9), (1, 9, 13)])
def test_census(n, q, keys):
    census = oracle_class_census(n, q)
    assert census.class_count == keys
    assert sum(census.sizes.values()) == sp_order(n, q)
    assert set(census.sizes) == set(enumerate_params(n, q))
    rows = census.to_json_obj()
    keys = [json.dumps(r["param"], sort_keys=True) for r in rows]
    assert keys == sorted(keys)


@pytest.mark.parametrize("n,q,q1,expected", [(1, 3, 3, 3), (1, 9, 3, 3), (1, 5, 5, 5), (1, 9, 9, 9)])
def test_oracle_invariant_examples(n, q, q1, expected):
    assert oracle_invariant_count(n, q, AutSpec(q1, True)) == expected


def _conjugation_invariance(F, elements, rng, trials):
    for _ in range(trials):
        g = rng.choice(elements)
        h = rng.choice(elements)
        conj = mat_mul(F, mat_mul(F, h, g), symplectic_inverse(F, h))
        assert wall_params_of(F, conj) == wall_params_of(F, g)


@pytest.mark.parametrize("q", [3, 5, 9])
def test_conjugation_invariance_sl2(q):
    F = field_of_order(q)
    _conjugation_invariance(F, enumerate_group(1, F).elements, random.Random(q), 1000)


def test_conjugation_invariance_sp4_3():
    F = field_of_order(3)
    rng = random.Random(11)
    pool = [random_symplectic(F, 2, rng) for _ in range(200)]
    _conjugation_invariance(F, pool, rng, 1000)


@pytest.mark.parametrize("q", [3, 5, 9])
def test_diagonal_and_field_actions_on_census(q):
    F = field_of_order(q)
    census = oracle_class_census(1, F)
    squares = [a for a in F.nonzero() if F.is_square(a)]
    for key, g in census.representatives.items():
        assert wall_params_of(F, diagonal_conjugate(F, g)) == apply_diagonal(key)
        for lam in squares:
            assert wall_params_of(F, diagonal_conjugate(F, g, lam)) == key
        for q1 in [r for r in F.subfield_orders() if r >= 3]:
            assert wall_params_of(F, field_power(F, g, q1)) == apply_field_aut(key, q1)


def test_levi_element_with_two_even_blocks_is_fixed_by_delta():
    F = field_of_order(3)
    A = ((1, 1), (0, 1))  # one Jordan block of size 2
    D = block_diag_D(F, A)
    assert is_symplectic(F, D)
    k = wall_params_of(F, D)
    assert k.mult(plus_one_orbit(F), 2) == 2
    assert wall_params_of(F, diagonal_conjugate(F, D)) == k


def test_transvection_witt_classes_split_by_square_class():
    # I + c E_{1,2n} has one block of size 2 for eigenvalue 1; the class of c decides Psi
    F = field_of_order(5)
    seen = set()
    for c in F.nonzero():
        M = [[1 if i == j else 0 for j in range(2)] for i in range(2)]
        M[0][1] = c
        M = tuple(tuple(r) for r in M)
        assert is_symplectic(F, M)
        seen.add((F.is_square(c), wall_params_of(F, M).psi(1, 1)))
    assert len({w for _, w in seen}) == 2
    assert all(w in (WittClass.SQUARE, WittClass.NONSQUARE) for _, w in seen)
    assert len(seen) == 2


def test_pow_and_powmod_agree():
    F = field_of_order(9)
    rng = random.Random(4)
    M = random_symplectic(F, 1, rng)
    chi = charpoly(F, M)
    # x^k mod chi evaluated at M equals M^k
    for k in (5, 17, 80):
        assert mat_apply(F, M, poly_powmod(F, (0, 1), k, chi)) == mat_pow(F, M, k)
