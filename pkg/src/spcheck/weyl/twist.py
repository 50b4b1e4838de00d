"""Sylow d-twists in the extended Weyl group V and the structure of V_d = C_V(v)."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

from .._budget import BudgetExceeded, default_budget
from .monomial import MonomialMat, chevalley_h, chevalley_n, e_root, simple_roots
from .signed import SignedPerm, centralizer_in_W, torus_fixed_order


@dataclass(frozen=True)
class TwistSpec:
    l: int
    d: int
    regular: bool = True

    def __post_init__(self):
        if self.l < 1 or self.d < 1:
            raise ValueError("l and d must be positive")
        if self.regular and (2 * self.l) % self.d:
            raise ValueError(f"d = {self.d} does not divide 2l = {2 * self.l}")
        if not self.regular and self.d0 > self.l:
            raise ValueError(f"d0 = {self.d0} exceeds l = {self.l}")

    @property
    def d0(self) -> int:
        return self.d if self.d % 2 else self.d // 2

    @property
    def l_prime(self) -> int:
        return self.l if self.regular else (self.l // self.d0) * self.d0

    @property
    def a(self) -> int:
        return self.l_prime // self.d0

    @property
    def eps(self) -> int:
        # sign making |T^{vF}| = (q^d0 - eps)^a; see the decisions log
        return 1 if self.d % 2 else -1

    def torus_order(self, q: int) -> int:
        return (q ** self.d0 - self.eps) ** self.a


def regular_numbers(l: int) -> list[int]:
    return [d for d in range(1, 2 * l + 1) if (2 * l) % d == 0]


def simple_n(l: int, k: int, t: int = 1) -> MonomialMat:
    """v_k = n_{alpha_k}(t) for the k-th simple root (1-based)."""
    return chevalley_n(simple_roots(l)[k - 1], t)


def h_long(l: int, i: int) -> MonomialMat:
    """h_{2e_i}(-1)."""
    return chevalley_h(e_root(l, i))


def coxeter_v0(l: int) -> MonomialMat:
    v = MonomialMat.identity(l)
    for k in range(1, l + 1):
        v = v * simple_n(l, k)
    return v


def coxeter_image(l: int) -> SignedPerm:
    """(1, 2, ..., l, -1, -2, ..., -l)."""
    return SignedPerm.from_cycles(l, [list(range(1, l + 1)) + [-i for i in range(1, l + 1)]])


def sylow_twist(spec: TwistSpec) -> MonomialMat:
    l = spec.l
    if spec.regular:
        return coxeter_v0(l) ** (2 * l // spec.d)
    lp = spec.l_prime
    w = MonomialMat.identity(l)
    for k in range(1, lp):
        w = w * simple_n(l, k)
    w = w * chevalley_n(e_root(l, lp), -1)
    return w ** spec.a


def bar_orbits(w: SignedPerm) -> list[tuple[int, ...]]:
    """Orbits of the image of w in S_l, each sorted, ordered by least element."""
    seen: set[int] = set()
    out = []
    for i in range(1, w.l + 1):
        if i in seen:
            continue
        orb = {i}
        x = abs(w(i))
        while x != i:
            orb.add(x)
            x = abs(w(x))
        seen |= orb
        out.append(tuple(sorted(orb)))
    return out


def twist_setting_checks(spec: TwistSpec) -> dict[str, bool]:
    """Orbit lengths of the twist on {1..l'} and the fixed tail l'+1..l."""
    w = sylow_twist(spec).rho()
    orbits = bar_orbits(w)
    moved = [o for o in orbits if any(i <= spec.l_prime for i in o)]
    return {
        "orbit_lengths": all(len(o) == spec.d0 for o in moved),
        "orbit_count": len(moved) == spec.a,
        "tail_fixed": all(w(i) == i for i in range(spec.l_prime + 1, spec.l + 1)),
    }


# -- the extended Weyl group ---------------------------------------------------

def v_order(l: int) -> int:
    out = 4 ** l
    for i in range(2, l + 1):
        out *= i
    return out


@lru_cache(maxsize=8)
def enumerate_V(l: int, budget: int | None = None) -> tuple[MonomialMat, ...]:
    """V = <n_a(-1)>, closed from the simple-root generators."""
    budget = default_budget() if budget is None else budget
    expected = v_order(l)
    if expected > budget:
        raise BudgetExceeded(f"|V| = {expected} exceeds budget {budget}", needed=expected,
                             budget=budget, progress={"l": l})
    gens = [simple_n(l, k, -1) for k in range(1, l + 1)]
    start = MonomialMat.identity(l)
    seen = {start}
    order = [start]
    i = 0
    while i < len(order):
        g = order[i]
        i += 1
        for s in gens:
            h = g * s
            if h not in seen:
                seen.add(h)
                order.append(h)
    return tuple(order)


def target_c1(spec: TwistSpec) -> SignedPerm:
    """The base generator on O_1: the cycle(s) of rho(v) through +-1, negated on O_1 for odd d."""
    w = sylow_twist(spec).rho()
    l = spec.l
    O1 = set(bar_orbits(w)[0])
    imgs = [w(i) if i in O1 else i for i in range(1, l + 1)]
    if spec.d % 2:
        imgs = [-x if i in O1 else x for i, x in zip(range(1, l + 1), imgs)]
    return SignedPerm(tuple(imgs))


def displayed_c1_even(spec: TwistSpec) -> SignedPerm:
    """(1, a+1, ..., a(d0-1)+1, -1, -a-1, ..., -a(d0-1)-1) for even d."""
    a, d0 = spec.a, spec.d0
    pos = [k * a + 1 for k in range(d0)]
    return SignedPerm.from_cycles(spec.l, [pos + [-x for x in pos]])


def _is_elementary_abelian_basis(gens: list[MonomialMat], group: list[MonomialMat]) -> bool:
    """gens are commuting involutions whose products give ``group`` exactly once each."""
    ident = MonomialMat.identity(gens[0].l) if gens else None
    if any(g * g != ident for g in gens):
        return False
    if any(x * y != y * x for x in gens for y in gens):
        return False
    products = {ident}
    for g in gens:
        products |= {p * g for p in products}
    return len(products) == 2 ** len(gens) and products == set(group)


@dataclass
class WeylReport:
    l: int
    d: int
    checks: dict[str, bool] = field(default_factory=dict)
    data: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {"l": self.l, "d": self.d, "ok": self.ok,
                "checks": dict(sorted(self.checks.items())), "data": self.data}


def extended_weyl_checks(spec: TwistSpec, qs: tuple[int, ...] = (3, 5, 9),
                         budget: int | None = None) -> WeylReport:
    """Structural assertions for V_d = C_V(v); failures are reported, not raised."""
    if not spec.regular:
        raise ValueError("the V_d analysis covers regular d only")
    l, d0, a = spec.l, spec.d0, spec.a
    rep = WeylReport(l, spec.d)
    V = enumerate_V(l, budget)
    ident = MonomialMat.identity(l)
    rep.checks["V_order"] = len(V) == v_order(l)
    H = [x for x in V if x.is_diagonal()]
    rep.checks["H_order"] = len(H) == 2 ** l
    rep.checks["rho_kernel_is_H"] = all((x.rho() == SignedPerm.identity(l)) == x.is_diagonal()
                                        for x in V)

    v = sylow_twist(spec)
    w = v.rho()
    rep.checks["v0_image"] = coxeter_v0(l).rho() == coxeter_image(l)
    orbits = bar_orbits(w)
    rep.checks["orbit_lengths"] = all(len(o) == d0 for o in orbits) and len(orbits) == a
    rep.checks["orbits_are_residues"] = all(o == tuple(range(k, l + 1, a))
                                            for k, o in zip(range(1, a + 1), orbits))

    Vd = [x for x in V if x * v == v * x]
    CW = centralizer_in_W(w, budget)
    rho_Vd = {x.rho() for x in Vd}
    rep.checks["rho_Vd_eq_centralizer"] = rho_Vd == set(CW)
    rep.checks["centralizer_order"] = len(CW) == (2 * d0) ** a * _factorial(a)
    Hd = [x for x in H if x * v == v * x]
    rep.checks["Vd_order"] = len(Vd) == len(Hd) * len(rho_Vd)

    hk = []
    for orb in orbits:
        h = ident
        for i in orb:
            h = h * h_long(l, i)
        hk.append(h)
    rep.checks["Hd_basis"] = len(Hd) == 2 ** a and _is_elementary_abelian_basis(hk, Hd)

    vk = [simple_n(l, k) for k in range(1, l + 1)]
    pk = []
    for k in range(1, a):
        p = ident
        for i in range(d0):
            p = p * vk[k - 1].conj(v ** i)
        pk.append(p)
    rep.checks["p_in_Vd"] = all(p * v == v * p for p in pk)
    rep.checks["p_swaps_orbits"] = all(
        {abs(p.rho()(i)) for i in orbits[k]} == set(orbits[k + 1])
        and {abs(p.rho()(i)) for i in orbits[k + 1]} == set(orbits[k])
        for k, p in enumerate(pk))
    rep.checks["p_square"] = all(pk[k] * pk[k] == hk[k] * hk[k + 1] for k in range(len(pk)))
    rep.checks["p_braid"] = all(pk[k] * pk[k + 1] * pk[k] == pk[k + 1] * pk[k] * pk[k + 1]
                                for k in range(len(pk) - 1))
    rep.checks["p_commute_far"] = all(pk[i] * pk[j] == pk[j] * pk[i]
                                      for i in range(len(pk)) for j in range(i + 2, len(pk)))

    c1_bar = target_c1(spec)
    rep.checks["c1_bar_centralizes"] = c1_bar * w == w * c1_bar and c1_bar.order() == 2 * d0
    if spec.d % 2 == 0:
        rep.checks["c1_bar_matches_display"] = c1_bar == displayed_c1_even(spec)
    O1 = set(orbits[0])
    found = [x for x in Vd if x.rho() == c1_bar and x.support() <= O1]
    rep.checks["c1_found"] = bool(found)
    for q in qs:
        rep.checks[f"torus_order_q{q}"] = torus_fixed_order(w, q) == spec.torus_order(q)

    rep.data = {
        "d0": d0, "a": a, "eps": spec.eps,
        "V_order": len(V), "H_order": len(H), "Vd_order": len(Vd), "Hd_order": len(Hd),
        "centralizer_order": len(CW),
        "rho_v": [list(c) for c in w.cycles()],
        "c1_bar": [list(c) for c in c1_bar.cycles()],
        "c1": list(found[0].cols) if found else None,
        "v": list(v.cols),
        "torus_orders": {str(q): torus_fixed_order(w, q) for q in qs},
    }
    return rep


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out
