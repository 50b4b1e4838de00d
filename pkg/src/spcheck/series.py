"""Truncated power series in t whose coefficients are integer polynomials in u.

The indeterminate u stands for q1, the order of the fixed field of a field
automorphism.  Checking an identity coefficient-by-coefficient in Z[u]
settles it for every q1 at once, up to the truncation order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class IntPoly:
    """Dense polynomial in u with exact integer coefficients, constant first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[int, ...] = tuple(c)

    @classmethod
    def const(cls, a: int) -> "IntPoly":
        return cls((a,))

    @classmethod
    def monomial(cls, k: int, a: int = 1) -> "IntPoly":
        return cls([0] * k + [a])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return IntPoly(out)

    def __neg__(self) -> "IntPoly":
        return IntPoly(-x for x in self.coeffs)

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other: "IntPoly | int") -> "IntPoly":
        if isinstance(other, int):
            return IntPoly(x * other for x in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "IntPoly":
        """Multiply by u^k."""
        if not self.coeffs:
            return self
        return IntPoly((0,) * k + self.coeffs)

    def exact_div(self, d: int) -> "IntPoly":
        if any(x % d for x in self.coeffs):
            raise ArithmeticError(f"{self} is not divisible by {d}")
        return IntPoly(x // d for x in self.coeffs)

    def __call__(self, u: int) -> int:
        acc = 0
        for x in reversed(self.coeffs):
            acc = acc * u + x
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = IntPoly.const(other)
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def to_list(self) -> list[int]:
        return list(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("u" if k == 1 else f"u^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{'*' + mono if mono else ''}"
            if not terms:
                terms.append(("-" if c < 0 else "") + body)
            else:
                terms.append(("- " if c < 0 else "+ ") + body)
        return " ".join(terms)


ZERO = IntPoly()
ONE = IntPoly.const(1)
U = IntPoly.monomial(1)


class TruncSeries:
    """Power series in t known through t^order."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Sequence[IntPoly | int] = ()):
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        c = [a if isinstance(a, IntPoly) else IntPoly.const(a) for a in coeffs[: order + 1]]
        c += [ZERO] * (order + 1 - len(c))
        self.order = order
        self.coeffs: list[IntPoly] = c

    @classmethod
    def one(cls, order: int) -> "TruncSeries":
        return cls(order, [ONE])

    def __getitem__(self, n: int) -> IntPoly:
        return self.coeffs[n]

    def _check(self, other: "TruncSeries") -> None:
        if self.order != other.order:
            raise ValueError(f"truncation orders differ: {self.order} vs {other.order}")

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        return TruncSeries(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        return TruncSeries(self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.order, [-a for a in self.coeffs])

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        return mul(self, other)

    def __eq__(self, other) -> bool:
        return (isinstance(other, TruncSeries) and self.order == other.order
                and self.coeffs == other.coeffs)

    def __repr__(self) -> str:
        return f"TruncSeries({self.order}, {self.coeffs!r})"

    def substitute_power(self, k: int) -> "TruncSeries":
        """The series in t^k, truncated at the same order."""
        out = [ZERO] * (self.order + 1)
        for n, c in enumerate(self.coeffs):
            if n * k > self.order:
                break
            out[n * k] = c
        return TruncSeries(self.order, out)

    def evaluate(self, u: int) -> list[int]:
        return [c(u) for c in self.coeffs]

    def times_binomial(self, k: int, c: IntPoly, power: int = 1) -> "TruncSeries":
        """Multiply by (1 + c t^k)^power; sparse, O(order * power)."""
        s = self
        for _ in range(power):
            out = list(s.coeffs)
            for n in range(self.order, k - 1, -1):
                if not s.coeffs[n - k].is_zero():
                    out[n] = out[n] + c * s.coeffs[n - k]
            s = TruncSeries(self.order, out)
        return s

    def over_binomial(self, k: int, c: IntPoly, power: int = 1) -> "TruncSeries":
        """Divide by (1 - c t^k)^power."""
        s = self
        for _ in range(power):
            out = list(s.coeffs)
            for n in range(k, self.order + 1):
                if not out[n - k].is_zero():
                    out[n] = out[n] + c * out[n - k]
            s = TruncSeries(self.order, out)
        return s

    def to_table(self) -> dict[str, list[int]]:
        return {str(n): c.to_list() for n, c in enumerate(self.coeffs)}

    def to_json(self) -> str:
        return json.dumps({"order": self.order, "coefficients": self.to_table()}, sort_keys=True)


def mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """Cauchy product truncated at the common order."""
    a._check(b)
    N = a.order
    out = [ZERO] * (N + 1)
    for i, x in enumerate(a.coeffs):
        if x.is_zero():
            continue
        for j in range(N + 1 - i):
            y = b.coeffs[j]
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return TruncSeries(N, out)


def inverse_unit(a: TruncSeries) -> TruncSeries:
    if a.coeffs[0] != ONE:
        raise ValueError("constant term must be 1 to invert")
    N = a.order
    inv = [ZERO] * (N + 1)
    inv[0] = ONE
    for n in range(1, N + 1):
        acc = ZERO
        for k in range(1, n + 1):
            if not a.coeffs[k].is_zero():
                acc = acc + a.coeffs[k] * inv[n - k]
        inv[n] = -acc
    return TruncSeries(N, inv)


# -- builders ------------------------------------------------------------------
#
# Factors indexed by i > N cannot reach t^N and are skipped.

def build_genfun_c(N: int) -> TruncSeries:
    """prod_{i>=1} (1 + t^{2i})^2 / (1 - u t^i)."""
    s = TruncSeries.one(N)
    for i in range(1, N + 1):
        if 2 * i <= N:
            s = s.times_binomial(2 * i, ONE, 2)
        s = s.over_binomial(i, U)
    return s


def build_f0(N: int) -> TruncSeries:
    """prod_{i>=1} (1 - t^i)^2 / (1 - u t^i)."""
    s = TruncSeries.one(N)
    for i in range(1, N + 1):
        s = s.times_binomial(i, -ONE, 2)
        s = s.over_binomial(i, U)
    return s


def build_fplus(N: int) -> TruncSeries:
    """prod_{i>=1} (1 + t^{2i}) / (1 - t^i)."""
    s = TruncSeries.one(N)
    for i in range(1, N + 1):
        if 2 * i <= N:
            s = s.times_binomial(2 * i, ONE)
        s = s.over_binomial(i, ONE)
    return s


def _partitions_multiplicities(n: int, largest: int | None = None):
    """Yield partitions of n as {part: multiplicity} dicts."""
    if largest is None:
        largest = n
    if n == 0:
        yield {}
        return
    for part in range(min(n, largest), 0, -1):
        for k in range(n // part, 0, -1):
            for rest in _partitions_multiplicities(n - k * part, part - 1):
                d = dict(rest)
                d[part] = k
                yield d


def build_fplus_by_definition(N: int) -> TruncSeries:
    """sum_n (sum over partitions m of n of 2^{#even parts that occur}) t^n."""
    coeffs = []
    for n in range(N + 1):
        total = 0
        for mult in _partitions_multiplicities(n):
            s = sum(1 for part in mult if part % 2 == 0)
            total += 2 ** s
        coeffs.append(total)
    return TruncSeries(N, coeffs)


def build_theta(N: int) -> TruncSeries:
    """sum_{j>=0} t^{j^2 + j}."""
    coeffs = [0] * (N + 1)
    j = 0
    while j * j + j <= N:
        coeffs[j * j + j] = 1
        j += 1
    return TruncSeries(N, coeffs)


def build_partition(N: int) -> TruncSeries:
    """prod_{m>0} 1/(1 - t^m), the partition generating function."""
    s = TruncSeries.one(N)
    for m in range(1, N + 1):
        s = s.over_binomial(m, ONE)
    return s


def build_class_number(N: int) -> TruncSeries:
    """prod_{i>=1} (1 + t^i)^4 / (1 - u t^i): class numbers of Sp_2n(u), u odd."""
    s = TruncSeries.one(N)
    for i in range(1, N + 1):
        s = s.times_binomial(i, ONE, 4)
        s = s.over_binomial(i, U)
    return s


def build_gend(N: int) -> TruncSeries:
    """(sum_j t^{j^2+j}) prod_{i>=1} 1 / ((1 - u t^i)(1 - t^{2i}))."""
    s = build_theta(N)
    for i in range(1, N + 1):
        s = s.over_binomial(i, U)
        if 2 * i <= N:
            s = s.over_binomial(2 * i, ONE)
    return s


# -- identity checks -----------------------------------------------------------

@dataclass
class IdentityReport:
    name: str
    order: int
    ok: bool
    mismatches: list[tuple[int, IntPoly, IntPoly]] = field(default_factory=list)

    @property
    def first_mismatch(self) -> int | None:
        return self.mismatches[0][0] if self.mismatches else None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "ok": self.ok,
            "mismatches": [[i, a.to_list(), b.to_list()] for i, a, b in self.mismatches],
        }


def compare(name: str, lhs: TruncSeries, rhs: TruncSeries) -> IdentityReport:
    lhs._check(rhs)
    bad = [(n, a, b) for n, (a, b) in enumerate(zip(lhs.coeffs, rhs.coeffs)) if a != b]
    return IdentityReport(name, lhs.order, not bad, bad)


def jacobi_sides(N: int, perturb: int | None = None) -> tuple[TruncSeries, TruncSeries]:
    """Both sides of sum_{i>=0} t^{i^2+i} = prod (1 - t^{2i}) prod (1 + t^{2i})^2.

    ``perturb=k`` drops the factor (1 - t^{2k}) from the right-hand side,
    which must produce a mismatch (negative control).
    """
    lhs = build_theta(N)
    rhs = TruncSeries.one(N)
    for i in range(1, N // 2 + 1):
        if i != perturb:
            rhs = rhs.times_binomial(2 * i, -ONE)
        rhs = rhs.times_binomial(2 * i, ONE, 2)
    return lhs, rhs


def verify_jacobi(N: int, perturb: int | None = None) -> IdentityReport:
    lhs, rhs = jacobi_sides(N, perturb)
    return compare("jacobi", lhs, rhs)


def verify_main_identity(N: int) -> IdentityReport:
    return compare("main-identity", build_genfun_c(N), build_gend(N))


def verify_fplus_closed_form(N: int) -> IdentityReport:
    return compare("fplus-closed-form", build_fplus_by_definition(N), build_fplus(N))


def verify_genfun_factorization(N: int) -> IdentityReport:
    fp = build_fplus(N)
    return compare("genfun-factorization", build_f0(N) * fp * fp, build_genfun_c(N))


def coefficient_table(s: TruncSeries) -> list[dict]:
    return [{"n": n, "coefficient": c.to_list()} for n, c in enumerate(s.coeffs)]
