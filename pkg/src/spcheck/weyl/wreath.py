"""The wreath group C_f wr S_a acting on residue tuples, its stabilizers, and mu.

Elements are pairs (k, s): k a tuple of exponents mod f, s a permutation of
range(a) as a tuple.  With g a fixed multiplier of order f on Z/N, (k, s)
sends xi to y with y[s[i]] = g^k[s[i]] * xi[i].
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from math import factorial
from typing import Iterator, Sequence

from .._budget import BudgetExceeded, default_budget
from .twist import TwistSpec

WElem = tuple[tuple[int, ...], tuple[int, ...]]


def wreath_elements(f: int, a: int) -> Iterator[WElem]:
    for s in itertools.permutations(range(a)):
        for k in itertools.product(range(f), repeat=a):
            yield k, s


def wreath_mul(f: int, x: WElem, y: WElem) -> WElem:
    """x * y, acting as y first."""
    k, s = x
    k2, s2 = y
    a = len(s)
    s_inv = [0] * a
    for i, j in enumerate(s):
        s_inv[j] = i
    prod = tuple((k[m] + k2[s_inv[m]]) % f for m in range(a))
    return prod, tuple(s[s2[i]] for i in range(a))


def wreath_inverse(f: int, x: WElem) -> WElem:
    k, s = x
    a = len(s)
    s_inv = [0] * a
    for i, j in enumerate(s):
        s_inv[j] = i
    return tuple((-k[s[i]]) % f for i in range(a)), tuple(s_inv)


def wreath_act(x: WElem, xi: Sequence[int], g: int, N: int) -> tuple[int, ...]:
    k, s = x
    y = [0] * len(xi)
    for i, v in enumerate(xi):
        y[s[i]] = pow(g, k[s[i]], N) * v % N
    return tuple(y)


def wreath_mu(f: int, x: WElem) -> int:
    """(prod h_i)^(f/2) with h_i = exp(2 pi i k_i / f); equals (-1)^(sum k_i)."""
    if f % 2:
        raise ValueError("mu needs an even f")
    k, _ = x
    # (zeta_f^{sum k})^{f/2} = (-1)^{sum k}
    return -1 if sum(k) % 2 else 1


@dataclass
class MuReport:
    f: int
    n: int
    homomorphism: bool
    order_divides_2: bool
    nontrivial_on_base: bool
    trivial_on_top: bool

    @property
    def ok(self) -> bool:
        return self.homomorphism and self.order_divides_2


def check_mu(f: int, n: int) -> MuReport:
    """Exhaustive multiplicativity of mu on C_f wr S_n."""
    elems = list(wreath_elements(f, n))
    mu = {x: wreath_mu(f, x) for x in elems}
    hom = all(mu[wreath_mul(f, x, y)] == mu[x] * mu[y] for x in elems for y in elems)
    ident_perm = tuple(range(n))
    base = [x for x in elems if x[1] == ident_perm]
    tops = [x for x in elems if not any(x[0])]
    return MuReport(
        f, n, hom,
        all(v in (1, -1) for v in mu.values()),
        any(mu[x] == -1 for x in base),
        all(mu[x] == 1 for x in tops),
    )


# -- the Galois-type group acting on one torus factor --------------------------

@dataclass(frozen=True)
class FactorAction:
    """The cyclic group generated by k -> g k on Z/N, N = q^d0 - eps."""

    N: int
    g: int
    order: int

    def orbit(self, x: int) -> frozenset[int]:
        return frozenset(pow(self.g, e, self.N) * x % self.N for e in range(self.order))

    def stabilizer_order(self, x: int) -> int:
        return sum(1 for e in range(self.order) if pow(self.g, e, self.N) * x % self.N == x)


def factor_action(spec: TwistSpec, q: int) -> FactorAction:
    """Multiplier q (even d) or -q (odd d) on Z/(q^d0 - eps).

    For odd d this is Frobenius combined with inversion; in both cases it
    generates a cyclic group of order 2 d0 whose involution is -1.  The
    action need not be faithful (N = 2), so the abstract order is kept.
    """
    N = q ** spec.d0 - spec.eps
    g = q % N if spec.d % 2 == 0 else (-q) % N
    order = 2 * spec.d0
    if pow(g, order, N) != 1 % N:
        raise AssertionError(f"{g}^{order} is not 1 mod {N}")
    return FactorAction(N, g, order)


def involution_is_inversion(act: FactorAction) -> bool:
    if act.order % 2:
        return False
    inv = pow(act.g, act.order // 2, act.N)
    return all(inv * x % act.N == (-x) % act.N for x in range(act.N))


@dataclass
class ShapeReport:
    xi: tuple[int, ...]
    shape: list[tuple[int, int]]  # (|G_zeta|, |I_zeta|) sorted
    formula_order: int
    brute_order: int | None = None

    @property
    def ok(self) -> bool:
        return self.brute_order is None or self.brute_order == self.formula_order


def shape_of(act: FactorAction, xi: Sequence[int]) -> list[tuple[int, int]]:
    groups: Counter = Counter()
    stab = {}
    for x in xi:
        orb = act.orbit(x)
        groups[orb] += 1
        stab[orb] = act.stabilizer_order(x)
    return sorted((stab[o], n) for o, n in groups.items())


def formula_order(shape: Sequence[tuple[int, int]]) -> int:
    out = 1
    for g, n in shape:
        out *= g ** n * factorial(n)
    return out


def brute_stabilizer(act: FactorAction, xi: Sequence[int]) -> list[WElem]:
    xi = tuple(x % act.N for x in xi)
    return [x for x in wreath_elements(act.order, len(xi)) if wreath_act(x, xi, act.g, act.N) == xi]


def stabilizer_shape(spec: TwistSpec, q: int, xi: Sequence[int], brute: bool = True,
                     budget: int | None = None) -> ShapeReport:
    act = factor_action(spec, q)
    if len(xi) != spec.a:
        raise ValueError(f"xi needs {spec.a} entries")
    xi = tuple(x % act.N for x in xi)
    shape = shape_of(act, xi)
    rep = ShapeReport(xi, shape, formula_order(shape))
    if brute:
        budget = default_budget() if budget is None else budget
        size = act.order ** spec.a * factorial(spec.a)
        if size > budget:
            raise BudgetExceeded(f"wreath group of order {size} exceeds budget {budget}",
                                 needed=size, budget=budget, progress={"xi": list(xi)})
        rep.brute_order = len(brute_stabilizer(act, xi))
    return rep


@dataclass
class GridReport:
    l: int
    d: int
    q: int
    tuples: int = 0
    orbits: int = 0
    mismatches: list[tuple[int, ...]] = field(default_factory=list)
    brute_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {"l": self.l, "d": self.d, "q": self.q, "tuples": self.tuples,
                "orbits": self.orbits, "brute_checked": self.brute_checked,
                "mismatches": [list(m) for m in self.mismatches], "ok": self.ok}


def stabilizer_grid(spec: TwistSpec, q: int, brute_limit: int = 100_000,
                    tuple_limit: int = 200_000) -> GridReport:
    """Every xi in (Z/N)^a: orbit-stabilizer order against the formula.

    Orbits come from a breadth-first search under the wreath generators; the
    brute-force stabilizer is also computed on each orbit representative
    when the group has at most ``brute_limit`` elements.
    """
    act = factor_action(spec, q)
    a, f, N = spec.a, act.order, act.N
    rep = GridReport(spec.l, spec.d, q)
    if N ** a > tuple_limit:
        raise BudgetExceeded(f"{N}^{a} residue tuples exceed {tuple_limit}",
                             needed=N ** a, budget=tuple_limit, progress={"l": spec.l, "d": spec.d})
    group_order = f ** a * factorial(a)
    ident = tuple(range(a))
    gens: list[WElem] = [((1,) + (0,) * (a - 1), ident)]
    for k in range(a - 1):
        s = list(ident)
        s[k], s[k + 1] = s[k + 1], s[k]
        gens.append(((0,) * a, tuple(s)))
    seen: set[tuple[int, ...]] = set()
    for xi in itertools.product(range(N), repeat=a):
        if xi in seen:
            continue
        orbit = {xi}
        frontier = [xi]
        while frontier:
            y = frontier.pop()
            for g in gens:
                z = wreath_act(g, y, act.g, N)
                if z not in orbit:
                    orbit.add(z)
                    frontier.append(z)
        seen |= orbit
        rep.orbits += 1
        stab = group_order // len(orbit)
        if group_order % len(orbit):
            rep.mismatches.append(xi)
            continue
        if group_order <= brute_limit:
            rep.brute_checked += 1
            if len(brute_stabilizer(act, xi)) != stab:
                rep.mismatches.append(xi)
                continue
        for y in orbit:
            if formula_order(shape_of(act, y)) != stab:
                rep.mismatches.append(y)
    rep.tuples = len(seen)
    return rep


# -- normalizers ---------------------------------------------------------------

@dataclass
class NormalizerReport:
    xi: tuple[int, ...]
    normalizer_order: int
    predicted_order: int
    matches: bool
    pair_normalizer_order: int | None = None
    pair_predicted_order: int | None = None
    pair_matches: bool | None = None

    @property
    def ok(self) -> bool:
        return self.matches and self.pair_matches is not False


def normalizer_check(spec: TwistSpec, q: int, xi: Sequence[int]) -> NormalizerReport:
    """Brute-force N(W_xi) against (Z W_xi) S, and N(W_xi, ker nu) against (Z W_xi) S_nu.

    Here Z holds the diagonal copies of the factor group on each block I_zeta
    and S the order-preserving block permutations between blocks with equal
    stabilizers.  nu is mu on the block of the order-2 residue.
    """
    act = factor_action(spec, q)
    a, f, N = spec.a, act.order, act.N
    xi = tuple(x % N for x in xi)
    G = list(wreath_elements(f, a))
    W = brute_stabilizer(act, xi)
    Wset = set(W)

    def conj_set(g, S):
        gi = wreath_inverse(f, g)
        return {wreath_mul(f, wreath_mul(f, g, x), gi) for x in S}

    normalizer = [g for g in G if conj_set(g, W) == Wset]

    # blocks I_zeta by G-orbit of the entries
    blocks: dict[frozenset, list[int]] = {}
    for i, x in enumerate(xi):
        blocks.setdefault(act.orbit(x), []).append(i)
    block_list = list(blocks.values())
    stab = {tuple(b): act.stabilizer_order(xi[b[0]]) for b in block_list}

    Zset = set()
    for ks in itertools.product(range(f), repeat=len(block_list)):
        k = [0] * a
        for e, b in zip(ks, block_list):
            for i in b:
                k[i] = e
        Zset.add((tuple(k), tuple(range(a))))
    S = []
    for s in itertools.permutations(range(a)):
        ok = True
        for b in block_list:
            image = sorted(s[i] for i in b)
            target = next((c for c in block_list if sorted(c) == image), None)
            if target is None or stab[tuple(target)] != stab[tuple(b)]:
                ok = False
                break
            if any(s[i] > s[j] for i, j in zip(b, b[1:])):
                ok = False
                break
        if ok:
            S.append(((0,) * a, s))
    ZW = {wreath_mul(f, z, w) for z in Zset for w in W}
    predicted = {wreath_mul(f, x, s) for x in ZW for s in S}
    rep = NormalizerReport(xi, len(normalizer), len(predicted), set(normalizer) == predicted)

    half = N // 2
    two_block = next((b for b in block_list if xi[b[0]] == half), None)
    if two_block is not None:
        def nu(x):
            return -1 if sum(x[0][i] for i in two_block) % 2 else 1
        kernel = {x for x in W if nu(x) == 1}
        pair = [g for g in normalizer if conj_set(g, kernel) == kernel]
        S_nu = [s for s in S if sorted(s[1][i] for i in two_block) == sorted(two_block)]
        pred_pair = {wreath_mul(f, x, s) for x in ZW for s in S_nu}
        rep.pair_normalizer_order = len(pair)
        rep.pair_predicted_order = len(pred_pair)
        rep.pair_matches = set(pair) == pred_pair
    return rep
