"""Signed permutations: the Weyl group of type C_l."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import sympy

from .._budget import BudgetExceeded, default_budget


@dataclass(frozen=True)
class SignedPerm:
    """A bijection s of {+-1..+-l} with s(-i) = -s(i), stored as (s(1), ..., s(l)).

    Composition ``a * b`` applies b first.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        l = len(self.images)
        if sorted(abs(x) for x in self.images) != list(range(1, l + 1)):
            raise ValueError(f"not a signed permutation: {self.images}")

    @classmethod
    def identity(cls, l: int) -> "SignedPerm":
        return cls(tuple(range(1, l + 1)))

    @classmethod
    def from_cycles(cls, l: int, cycles: Sequence[Sequence[int]]) -> "SignedPerm":
        """Build from cycles on {+-1..+-l}; the negated cycles are implied."""
        img = {i: i for i in range(1, l + 1)}
        img.update({-i: -i for i in range(1, l + 1)})
        for cyc in cycles:
            for x, y in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[x] = y
                img[-x] = -y
        return cls(tuple(img[i] for i in range(1, l + 1)))

    @property
    def l(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1] if i > 0 else -self.images[-i - 1]

    def __mul__(self, other: "SignedPerm") -> "SignedPerm":
        return SignedPerm(tuple(self(other(i)) for i in range(1, self.l + 1)))

    def inverse(self) -> "SignedPerm":
        inv = [0] * self.l
        for i, x in enumerate(self.images, start=1):
            inv[abs(x) - 1] = i if x > 0 else -i
        return SignedPerm(tuple(inv))

    def __pow__(self, e: int) -> "SignedPerm":
        base = self if e >= 0 else self.inverse()
        out = SignedPerm.identity(self.l)
        for _ in range(abs(e)):
            out = out * base
        return out

    def order(self) -> int:
        k, x = 1, self
        ident = SignedPerm.identity(self.l)
        while x != ident:
            x = x * self
            k += 1
        return k

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles on {+-1..+-l}, each starting at its smallest |entry| (positive first)."""
        seen: set[int] = set()
        out = []
        for start in sorted(range(1, self.l + 1)) + [-i for i in range(1, self.l + 1)]:
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self(start)
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self(x)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def bar(self) -> tuple[int, ...]:
        """Image in S_l, forgetting signs."""
        return tuple(abs(x) for x in self.images)

    def matrix(self) -> list[list[int]]:
        """l x l signed permutation matrix: column i holds sign * e_|s(i)|."""
        l = self.l
        M = [[0] * l for _ in range(l)]
        for i, x in enumerate(self.images):
            M[abs(x) - 1][i] = 1 if x > 0 else -1
        return M

    def __repr__(self) -> str:
        cyc = self.cycles()
        return "SignedPerm(" + ("".join(str(c).replace(" ", "") for c in cyc) or "id") + ")"


def all_signed_perms(l: int) -> Iterator[SignedPerm]:
    for perm in itertools.permutations(range(1, l + 1)):
        for signs in itertools.product((1, -1), repeat=l):
            yield SignedPerm(tuple(s * x for s, x in zip(signs, perm)))


def weyl_order(l: int) -> int:
    out = 2 ** l
    for i in range(2, l + 1):
        out *= i
    return out


def centralizer_in_W(w: SignedPerm, budget: int | None = None) -> list[SignedPerm]:
    """Brute-force centralizer of ``w`` in the full signed permutation group."""
    budget = default_budget() if budget is None else budget
    size = weyl_order(w.l)
    if size > budget:
        raise BudgetExceeded(f"|W| = {size} exceeds budget {budget}", needed=size, budget=budget,
                             progress={"l": w.l})
    return [x for x in all_signed_perms(w.l) if x * w == w * x]


def torus_fixed_order(w: SignedPerm, q: int) -> int:
    """|det(q M_w - I)| on the cocharacter lattice, computed exactly."""
    M = sympy.Matrix(w.matrix())
    return abs(int((q * M - sympy.eye(w.l)).det()))
