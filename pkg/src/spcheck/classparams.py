"""Wall parameters (m, Psi+, Psi-) for conjugacy classes of Sp_2n(q).

``m`` assigns a multiplicity to each (eigenvalue orbit, Jordan block size).
``Psi+`` and ``Psi-`` record, for each even block size 2j of eigenvalue +1
(resp. -1) that occurs, the square class of the discriminant of the induced
symmetric form.

Counting invariant classes splits into two independent pieces.  Away from
+-1 an invariant m is constant on each block of eigenvalue orbits that the
field automorphism and inversion permute among themselves, so a block of
total degree W contributes a factor P(t^(W/2)) with P the partition series.
The +-1 part is small and is enumerated directly.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import sympy

from ._budget import BudgetExceeded, default_budget
from .gf import (GF, FrobOrbit, build_field, field_of_order, irreducible_polys,
                 is_irreducible, is_self_inverse, orbit_frobenius_power, orbit_inverse,
                 prime_power, self_reciprocal_candidates)
from .series import build_partition


class WittClass(enum.Enum):
    SQUARE = "square"
    NONSQUARE = "nonsquare"
    NEUTRAL = "neutral"

    def flipped(self) -> "WittClass":
        if self is WittClass.SQUARE:
            return WittClass.NONSQUARE
        if self is WittClass.NONSQUARE:
            return WittClass.SQUARE
        return self


def plus_one_orbit(F: GF) -> FrobOrbit:
    return FrobOrbit.of_element(F, 1)


def minus_one_orbit(F: GF) -> FrobOrbit:
    return FrobOrbit.of_element(F, F.neg(1))


MEntry = tuple[FrobOrbit, int, int]  # (orbit, block size j, multiplicity)


def _m_sort_key(entry: MEntry) -> tuple:
    orbit, j, _ = entry
    return (orbit.sort_key, -j)


@dataclass(frozen=True)
class SpClassParam:
    """One Wall parameter.  Construct through :meth:`make` to get canonical order.

    ``psi_plus``/``psi_minus`` hold only the block sizes j with a non-neutral
    value; :meth:`psi` reports NEUTRAL for the rest.
    """

    n: int
    field: GF = dc_field(repr=False)
    m: tuple[MEntry, ...]
    psi_plus: tuple[tuple[int, WittClass], ...] = ()
    psi_minus: tuple[tuple[int, WittClass], ...] = ()

    @classmethod
    def make(cls, n: int, field: GF, m: Iterable[MEntry] | dict,
             psi_plus: dict | Iterable = (), psi_minus: dict | Iterable = ()) -> "SpClassParam":
        if isinstance(m, dict):
            items = [(P, j, k) for (P, j), k in m.items()]
        else:
            items = list(m)
        merged: dict[tuple[FrobOrbit, int], int] = {}
        for P, j, k in items:
            merged[(P, j)] = merged.get((P, j), 0) + k
        entries = sorted(((P, j, k) for (P, j), k in merged.items() if k), key=_m_sort_key)

        def psi_tuple(psi) -> tuple:
            pairs = psi.items() if isinstance(psi, dict) else psi
            return tuple(sorted((j, w) for j, w in pairs if w is not WittClass.NEUTRAL))

        return cls(n, field, tuple(entries), psi_tuple(psi_plus), psi_tuple(psi_minus))

    def mult(self, P: FrobOrbit, j: int) -> int:
        for Q, i, k in self.m:
            if Q == P and i == j:
                return k
        return 0

    def psi(self, eps: int, j: int) -> WittClass:
        for i, w in (self.psi_plus if eps == 1 else self.psi_minus):
            if i == j:
                return w
        return WittClass.NEUTRAL

    def eps_orbit(self, eps: int) -> FrobOrbit:
        return plus_one_orbit(self.field) if eps == 1 else minus_one_orbit(self.field)

    def to_dict(self) -> dict:
        F = self.field
        return {
            "n": self.n,
            "q": F.q,
            "p": F.p,
            "modulus": list(F.modulus),
            "m": [{"orbit": list(P.poly), "part": j, "mult": k} for P, j, k in self.m],
            "psi_plus": [[j, w.value] for j, w in self.psi_plus],
            "psi_minus": [[j, w.value] for j, w in self.psi_minus],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "SpClassParam":
        p, m_exp = prime_power(d["q"])
        if p != d["p"]:
            raise ValueError(f"q = {d['q']} is not a power of p = {d['p']}")
        F = build_field(p, m_exp, tuple(d["modulus"]))
        m = [(FrobOrbit(F, tuple(e["orbit"])), e["part"], e["mult"]) for e in d["m"]]
        pp = [(j, WittClass(w)) for j, w in d["psi_plus"]]
        pm = [(j, WittClass(w)) for j, w in d["psi_minus"]]
        return cls.make(d["n"], F, m, pp, pm)

    @classmethod
    def from_json(cls, s: str) -> "SpClassParam":
        return cls.from_dict(json.loads(s))


@dataclass(frozen=True)
class AutSpec:
    """The automorphism delta^diagonal composed with the entrywise q1-power map."""

    q1: int
    diagonal: bool = False

    def check(self, F: GF) -> None:
        if self.q1 < 3:
            raise ValueError(f"q1 must be at least 3, got {self.q1}")
        if not F.is_power_of(self.q1):
            raise ValueError(f"q = {F.q} is not a power of q1 = {self.q1}")


@dataclass
class Validation:
    ok: bool
    violations: list[str]

    def __bool__(self) -> bool:
        return self.ok


def validate(param: SpClassParam) -> Validation:
    bad: list[str] = []
    F = param.field
    for P, j, k in param.m:
        if P.field != F:
            bad.append(f"orbit {P.poly} is over a different field")
        if j < 1 or k < 0:
            bad.append(f"bad entry (part {j}, mult {k}) at {P.poly}")
        if not is_irreducible(F, P.poly):
            bad.append(f"orbit polynomial {P.poly} is reducible")
    for P, j, k in param.m:
        Pi = orbit_inverse(P)
        if param.mult(Pi, j) != k:
            bad.append(f"m({Pi.poly},{j}) = {param.mult(Pi, j)} differs from m({P.poly},{j}) = {k}")
    for eps in (1, -1):
        E = param.eps_orbit(eps)
        for P, j, k in param.m:
            if P == E and j % 2 == 1 and k % 2:
                bad.append(f"odd multiplicity {k} at odd part {j} of eigenvalue {eps}")
        present = {j // 2 for P, j, k in param.m if P == E and j % 2 == 0 and k > 0}
        stored = param.psi_plus if eps == 1 else param.psi_minus
        keys = {j for j, _ in stored}
        for j in sorted(present - keys):
            bad.append(f"missing Witt class for eigenvalue {eps} at part {2 * j}")
        for j in sorted(keys - present):
            bad.append(f"Witt class given for eigenvalue {eps} at part {2 * j} with zero multiplicity")
    dim = sum(j * k * P.size for P, j, k in param.m)
    if dim != 2 * param.n:
        bad.append(f"total dimension {dim} != {2 * param.n}")
    return Validation(not bad, bad)


# -- automorphism actions ------------------------------------------------------

def apply_field_aut(param: SpClassParam, q1: int) -> SpClassParam:
    F = param.field
    AutSpec(q1).check(F)
    m = [(orbit_frobenius_power(P, q1), j, k) for P, j, k in param.m]
    return SpClassParam.make(param.n, F, m, param.psi_plus, param.psi_minus)


def apply_diagonal(param: SpClassParam) -> SpClassParam:
    """Flip Psi_eps(j) exactly when m(eps, 2j) is odd."""
    psis = []
    for eps in (1, -1):
        E = param.eps_orbit(eps)
        stored = param.psi_plus if eps == 1 else param.psi_minus
        psis.append([(j, w.flipped() if param.mult(E, 2 * j) % 2 else w) for j, w in stored])
    return SpClassParam.make(param.n, param.field, param.m, psis[0], psis[1])


def apply_aut(param: SpClassParam, aut: AutSpec) -> SpClassParam:
    out = apply_field_aut(param, aut.q1)
    return apply_diagonal(out) if aut.diagonal else out


def is_invariant(param: SpClassParam, aut: AutSpec) -> bool:
    return apply_aut(param, aut) == param


# -- enumeration ---------------------------------------------------------------

def _partitions(n: int, largest: int | None = None) -> Iterator[dict[int, int]]:
    """Partitions of n as {part: multiplicity}, in a fixed order."""
    if largest is None:
        largest = n
    if n == 0:
        yield {}
        return
    for part in range(min(n, largest), 0, -1):
        for k in range(n // part, 0, -1):
            for rest in _partitions(n - k * part, part - 1):
                d = dict(rest)
                d[part] = k
                yield d


def symplectic_partitions(dim: int) -> Iterator[dict[int, int]]:
    """Partitions of ``dim`` whose odd parts have even multiplicity."""
    for lam in _partitions(dim):
        if all(k % 2 == 0 for part, k in lam.items() if part % 2):
            yield lam


def _eps_choices(E: FrobOrbit, half: int) -> Iterator[tuple[list[MEntry], list]]:
    """All (m entries, Psi entries) for eigenvalue orbit E on a 2*half block."""
    for lam in symplectic_partitions(2 * half):
        entries = [(E, j, k) for j, k in lam.items()]
        even = sorted(j // 2 for j in lam if j % 2 == 0)
        for witts in itertools.product((WittClass.SQUARE, WittClass.NONSQUARE), repeat=len(even)):
            yield entries, list(zip(even, witts))


@dataclass(frozen=True)
class _Unit:
    """Orbits that carry a single partition: one self-inverse orbit or a pair."""

    orbits: tuple[FrobOrbit, ...]
    weight: int  # contribution to n per unit of partition size


def census_candidates(n: int, q: int) -> int:
    """Polynomials inspected by the explicit orbit census at (n, q)."""
    return sum(q ** d for d in range(1, n + 1)) * 2


def orbit_units(F: GF, n: int) -> list[_Unit]:
    """Self-inverse orbits of degree <= 2n and inverse pairs of degree <= n, minus +-1."""
    units: list[_Unit] = []
    ones = {plus_one_orbit(F), minus_one_orbit(F)}
    for e in range(1, n + 1):
        for f in self_reciprocal_candidates(F, e):
            if is_irreducible(F, f):
                units.append(_Unit((FrobOrbit(F, f),), e))
    for d in range(1, n + 1):
        for f in irreducible_polys(F, d):
            P = FrobOrbit(F, f)
            if P in ones or is_self_inverse(P):
                continue
            Pi = orbit_inverse(P)
            if P < Pi:
                units.append(_Unit((P, Pi), d))
    units.sort(key=lambda u: (u.weight, u.orbits[0].sort_key))
    return units


def _check_budget(n: int, F: GF, budget: int | None, what: str) -> None:
    budget = default_budget() if budget is None else budget
    needed = census_candidates(n, F.q)
    if needed > budget:
        raise BudgetExceeded(f"{what} at n={n}, q={F.q} needs {needed} candidates, budget {budget}",
                             needed=needed, budget=budget,
                             progress={"n": n, "q": F.q, "stage": what})


def enumerate_params(n: int, field: GF | int, budget: int | None = None) -> list[SpClassParam]:
    """Every Wall parameter at (n, q) exactly once, in a deterministic order."""
    F = field if isinstance(field, GF) else field_of_order(field)
    if n < 1:
        raise ValueError("n must be positive")
    _check_budget(n, F, budget, "enumerate_params")
    units = orbit_units(F, n)
    out: list[SpClassParam] = []
    plus, minus = plus_one_orbit(F), minus_one_orbit(F)
    # +-1 blocks first, then the remaining units fill what is left
    for half_plus in range(n + 1):
        for half_minus in range(n + 1 - half_plus):
            rest = n - half_plus - half_minus
            plus_opts = list(_eps_choices(plus, half_plus)) if half_plus else [([], [])]
            minus_opts = list(_eps_choices(minus, half_minus)) if half_minus else [([], [])]
            for other in _fill_units(units, 0, rest):
                for pe, ppsi in plus_opts:
                    for me, mpsi in minus_opts:
                        out.append(SpClassParam.make(n, F, pe + me + other, ppsi, mpsi))
    return out


def _fill_units(units: Sequence[_Unit], start: int, rem: int) -> Iterator[list[MEntry]]:
    if rem == 0:
        yield []
        return
    for i in range(start, len(units)):
        u = units[i]
        if u.weight > rem:
            break  # units are sorted by weight
        for size in range(1, rem // u.weight + 1):
            for lam in _partitions(size):
                entries = [(P, j, k) for P in u.orbits for j, k in lam.items()]
                for tail in _fill_units(units, i + 1, rem - size * u.weight):
                    yield entries + tail


def count_classes(n: int, field: GF | int, budget: int | None = None) -> int:
    return len(enumerate_params(n, field, budget))


# -- invariant counting --------------------------------------------------------

@lru_cache(maxsize=None)
def _eps_invariant_counts(q: int, n: int, q1: int, diagonal: bool) -> tuple[int, ...]:
    """counts[h] = invariant parameters supported on one of +-1 with half-dimension h.

    Computed by literally applying the automorphism; the answer does not
    depend on which of +-1 is used.
    """
    F = field_of_order(q)
    aut = AutSpec(q1, diagonal)
    E = plus_one_orbit(F)
    counts = [1]
    for half in range(1, n + 1):
        c = 0
        for entries, psi in _eps_choices(E, half):
            param = SpClassParam.make(half, F, entries, psi, ())
            c += is_invariant(param, aut)
        counts.append(c)
    return tuple(counts)


@dataclass(frozen=True)
class BlockCensus:
    """weights[w] = number of blocks of eigenvalue orbits with total degree 2w."""

    weights: tuple[int, ...]
    method: str


def block_census_explicit(F: GF, n: int, q1: int, budget: int | None = None) -> BlockCensus:
    """List the orbits and close them under the q1-power map and inversion."""
    _check_budget(n, F, budget, "block census")
    orbits: set[FrobOrbit] = set()
    for u in orbit_units(F, n):
        orbits.update(u.orbits)
    seen: set[FrobOrbit] = set()
    weights = [0] * (n + 1)
    for P in sorted(orbits):
        if P in seen:
            continue
        block = {P}
        frontier = [P]
        while frontier:
            Q = frontier.pop()
            for R in (orbit_frobenius_power(Q, q1), orbit_inverse(Q)):
                if R not in block:
                    block.add(R)
                    frontier.append(R)
        seen |= block
        total = sum(Q.size for Q in block)
        if total % 2:
            raise AssertionError(f"block of odd total degree {total}")
        # a block may include orbits beyond the listed degrees; it then weighs more than n
        if total // 2 <= n and block <= orbits:
            weights[total // 2] += 1
    return BlockCensus(tuple(weights), "explicit")


def block_census_by_orders(q: int, n: int, q1: int) -> BlockCensus:
    """Count blocks through the orders of their roots.

    A root of order r (r >= 3, prime to p) lies in a block of size s or 2s,
    where s is the order of q1 mod r; the block is closed under inversion
    exactly when -1 is a power of q1 mod r.  Every such r divides q1^s - 1.
    """
    weights = [0] * (n + 1)
    orders: set[int] = set()
    for s in range(1, 2 * n + 1):
        orders.update(int(r) for r in sympy.divisors(q1 ** s - 1))
    for r in sorted(orders):
        if r < 3:
            continue
        s = int(sympy.n_order(q1, r))
        if s > 2 * n:
            continue
        powers = {pow(q1, i, r) for i in range(s)}
        size = s if (r - 1) in powers else 2 * s
        if size > 2 * n:
            continue
        count = int(sympy.totient(r))
        if count % size:
            raise AssertionError(f"{count} roots of order {r} do not split into blocks of {size}")
        weights[size // 2] += count // size
    return BlockCensus(tuple(weights), "orders")


# irreducibility testing dominates the explicit census; past this many
# candidates the order census is used unless explicitly requested
EXPLICIT_LIMIT = 5_000


def block_census(F: GF, n: int, q1: int, method: str = "auto",
                 budget: int | None = None) -> BlockCensus:
    if method == "auto":
        b = default_budget() if budget is None else budget
        method = "explicit" if census_candidates(n, F.q) <= min(b, EXPLICIT_LIMIT) else "orders"
    if method == "explicit":
        return block_census_explicit(F, n, q1, budget)
    if method == "orders":
        return block_census_by_orders(F.q, n, q1)
    raise ValueError(f"unknown census method {method!r}")


def _series_product(n: int, census: BlockCensus, eps_counts: Sequence[int]) -> list[int]:
    p = [c(0) for c in build_partition(n).coeffs]
    series = [1] + [0] * n
    for w in range(1, n + 1):
        for _ in range(census.weights[w]):
            # multiply by P(t^w)
            new = [0] * (n + 1)
            for i, a in enumerate(series):
                if a:
                    for k in range(0, (n - i) // w + 1):
                        new[i + k * w] += a * p[k]
            series = new
    for _ in range(2):  # eigenvalues +1 and -1
        new = [0] * (n + 1)
        for i, a in enumerate(series):
            if a:
                for h in range(0, n - i + 1):
                    new[i + h] += a * eps_counts[h]
        series = new
    return series


def count_invariant(n: int, field: GF | int, aut: AutSpec, method: str = "auto",
                    budget: int | None = None) -> int:
    """Number of parameters at (n, q) fixed by ``aut``.

    ``method`` selects how the non-(+-1) orbits are counted: ``explicit``
    lists them over F_q, ``orders`` counts them by root orders, ``literal``
    filters :func:`enumerate_params`.  ``auto`` picks explicit when its
    candidate count is small.
    """
    F = field if isinstance(field, GF) else field_of_order(field)
    aut.check(F)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return 1
    if method == "literal":
        return sum(is_invariant(x, aut) for x in enumerate_params(n, F, budget))
    census = block_census(F, n, aut.q1, method, budget)
    eps_counts = _eps_invariant_counts(F.q, n, aut.q1, aut.diagonal)
    return _series_product(n, census, eps_counts)[n]


def admissible_q1(q: int) -> list[int]:
    """Every q1 >= 3 with q a power of q1."""
    F = field_of_order(q)
    return [r for r in F.subfield_orders() if r >= 3]
