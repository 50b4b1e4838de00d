"""Lusztig symbol combinatorics.

A symbol is an unordered pair of finite sets of nonnegative integers, taken
up to the shift ``(S, T) -> ({0} | S+1, {0} | T+1)``.  The statistics are

    rank   = sum(S) + sum(T) - floor((|S| + |T| - 1)^2 / 4)
    defect = ||S| - |T||

and both are constant on shift classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from ._budget import BudgetExceeded, default_budget
from .series import (IntPoly, TruncSeries, IdentityReport, build_f0, build_partition,
                     build_theta, compare)


@dataclass(frozen=True, order=True)
class LSymbol:
    top: tuple[int, ...]
    bottom: tuple[int, ...]

    @property
    def rank(self) -> int:
        c = len(self.top) + len(self.bottom)
        return sum(self.top) + sum(self.bottom) - (c - 1) ** 2 // 4 if c else 0

    @property
    def defect(self) -> int:
        return abs(len(self.top) - len(self.bottom))

    @property
    def degenerate(self) -> bool:
        return self.top == self.bottom

    def stats(self) -> "SymbolStats":
        return SymbolStats(self.rank, self.defect, self.degenerate)

    def shift(self) -> "LSymbol":
        """One step of the shift equivalence (not normalized)."""
        return LSymbol((0,) + tuple(x + 1 for x in self.top),
                       (0,) + tuple(x + 1 for x in self.bottom))

    def to_list(self) -> list[list[int]]:
        return [list(self.top), list(self.bottom)]


@dataclass(frozen=True)
class SymbolStats:
    rank: int
    defect: int
    degenerate: bool


def _check_row(row: Iterable[int]) -> tuple[int, ...]:
    r = tuple(int(x) for x in row)
    if any(x < 0 for x in r):
        raise ValueError(f"symbol entries must be nonnegative: {r}")
    if any(a >= b for a, b in zip(r, r[1:])):
        raise ValueError(f"symbol rows must be strictly increasing: {r}")
    return r


def normalize(top: Iterable[int], bottom: Iterable[int]) -> LSymbol:
    """Canonical representative: strip common zeros, then order the rows."""
    s, t = _check_row(top), _check_row(bottom)
    # strip a shared leading 0 and decrement until one row lacks 0
    while s and t and s[0] == 0 and t[0] == 0:
        s = tuple(x - 1 for x in s[1:])
        t = tuple(x - 1 for x in t[1:])
    if s > t:
        s, t = t, s
    return LSymbol(s, t)


# -- row generation ------------------------------------------------------------

def _partitions_at_most(total: int, parts: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``total`` into at most ``parts`` parts, weakly decreasing."""
    if largest is None:
        largest = total
    if total == 0:
        yield ()
        return
    if parts == 0:
        return
    for first in range(min(total, largest), 0, -1):
        if first * parts < total:
            break
        for rest in _partitions_at_most(total - first, parts - 1, first):
            yield (first,) + rest


def _row(size: int, partition: tuple[int, ...]) -> tuple[int, ...]:
    # staircase 0..size-1 plus the partition read from the top
    padded = (0,) * (size - len(partition)) + tuple(reversed(partition))
    return tuple(i + x for i, x in enumerate(padded))


def _odd_defect_shapes(n: int) -> Iterator[tuple[int, int, int]]:
    """(k, b, excess) with defect 2k+1, |T| = b, |S| = b+2k+1.

    For reduced symbols of these sizes the row sums exceed the two staircases
    by exactly n - k^2 - k, and the smallest reduced rank is k^2 + k + b,
    so b <= n - k^2 - k.  Entries are therefore bounded by n + defect^2.
    """
    k = 0
    while k * k + k <= n:
        excess = n - k * k - k
        for b in range(excess + 1):
            yield k, b, excess
        k += 1


def iter_odd_defect(n: int) -> Iterator[LSymbol]:
    """Every reduced odd-defect symbol of rank n, once each."""
    for k, b, excess in _odd_defect_shapes(n):
        a = b + 2 * k + 1
        for e_top in range(excess + 1):
            tops = list(_partitions_at_most(e_top, a))
            bottoms = list(_partitions_at_most(excess - e_top, b))
            for lam in tops:
                top_has_zero = len(lam) < a
                for mu in bottoms:
                    # both rows containing 0 would be a shift of a smaller symbol
                    if top_has_zero and len(mu) < b:
                        continue
                    # odd defect rows have distinct sizes, so no swap ambiguity
                    bottom, top = _row(b, mu), _row(a, lam)
                    yield LSymbol(bottom, top) if bottom < top else LSymbol(top, bottom)


@lru_cache(maxsize=None)
def _bipartitions(m: int) -> int:
    p = build_partition(max(m, 0))
    return sum(p[i](0) * p[m - i](0) for i in range(m + 1))


def phi_size_estimate(n: int) -> int:
    """Number of symbols phi(n) will generate; used for budgeting."""
    return sum(_bipartitions(excess) for k, b, excess in _odd_defect_shapes(n) if b == 0)


PAIRS_LIMIT = 50_000


@lru_cache(maxsize=None)
def _rows_by_length(excess: int) -> tuple[int, ...]:
    """counts[j] = number of partitions of ``excess`` with exactly j parts.

    Every row of size a whose entries exceed the staircase 0..a-1 by
    ``excess`` comes from one such partition with j <= a, and the row
    contains 0 exactly when j < a.
    """
    counts = [0] * (excess + 1)
    for lam in _partitions_at_most(excess, excess):
        counts[len(lam)] += 1
    return tuple(counts)


def _rows_fitting(excess: int, size: int) -> int:
    counts = _rows_by_length(excess)
    return sum(counts[: size + 1])


def _phi_by_rows(n: int) -> int:
    total = 0
    for k, b, excess in _odd_defect_shapes(n):
        a = b + 2 * k + 1
        for e_top in range(excess + 1):
            e_bot = excess - e_top
            pairs = _rows_fitting(e_top, a) * _rows_fitting(e_bot, b)
            # drop pairs where both rows contain 0
            if b > 0:
                pairs -= _rows_fitting(e_top, a - 1) * _rows_fitting(e_bot, b - 1)
            total += pairs
    return total


def _phi_by_pairs(n: int, dedupe: bool) -> int:
    if not dedupe:
        return sum(1 for _ in iter_odd_defect(n))
    seen = set()
    for sym in iter_odd_defect(n):
        canon = normalize(sym.top, sym.bottom)
        if canon != sym or sym.rank != n or sym.defect % 2 != 1:
            raise AssertionError(f"generator produced a non-canonical symbol {sym}")
        seen.add(canon)
    return len(seen)


def phi(n: int, budget: int | None = None, method: str = "auto", dedupe: bool = False) -> int:
    """Number of classes of symbols of rank n and odd defect, by exhaustive generation.

    ``method="pairs"`` builds every reduced symbol; with ``dedupe`` they are
    re-normalized into a set, which also checks the generator never repeats a
    class.  ``method="rows"`` generates every admissible row once and counts
    the (top, bottom) combinations per shape, which reaches rank 40 quickly.
    ``auto`` uses pairs up to PAIRS_LIMIT symbols.
    """
    if n < 0:
        raise ValueError("rank must be nonnegative")
    budget = default_budget() if budget is None else budget
    if method == "auto":
        method = "pairs" if phi_size_estimate(n) <= min(budget, PAIRS_LIMIT) else "rows"
    if method == "pairs":
        needed = phi_size_estimate(n)
        if needed > budget:
            raise BudgetExceeded(f"phi({n}) needs {needed} symbols, budget {budget}",
                                 needed=needed, budget=budget, progress={"n": n})
        return _phi_by_pairs(n, dedupe)
    if method == "rows":
        return _phi_by_rows(n)
    raise ValueError(f"unknown method {method!r}")


def iter_degenerate(rank: int) -> Iterator[LSymbol]:
    """Reduced degenerate symbols (S, S) of the given rank.

    With |S| = c and 0 not in S the rank is 2 sum(S) - c^2 + c, so a class of
    rank 2m has S = {1..c} lifted by a partition of m - c into at most c parts.
    """
    if rank % 2:
        raise ValueError(f"degenerate symbols have even rank, got {rank}")
    if rank < 0:
        raise ValueError("rank must be nonnegative")
    m = rank // 2
    if m == 0:
        yield LSymbol((), ())
        return
    for c in range(1, m + 1):
        for lam in _partitions_at_most(m - c, c):
            row = tuple(x + 1 for x in _row(c, lam))
            yield LSymbol(row, row)


def count_degenerate(rank: int) -> int:
    return sum(1 for _ in iter_degenerate(rank))


def phi_closed_form(N: int) -> TruncSeries:
    """P(t)^2 * sum_j t^{j^2+j}."""
    p = build_partition(N)
    return p * p * build_theta(N)


def phi_series(N: int, budget: int | None = None, method: str = "auto") -> TruncSeries:
    return TruncSeries(N, [phi(n, budget, method) for n in range(N + 1)])


def verify_phi_series(N: int, budget: int | None = None, method: str = "auto") -> IdentityReport:
    return compare("phi-series", phi_series(N, budget, method), phi_closed_form(N))


def dprime_parts(n: int, budget: int | None = None) -> tuple[IntPoly, IntPoly]:
    """(a_n, b_n) from the two convolutions, in the variable s = t^2.

    a: f0(s) * Phi(s);  b: f0(s) * Phi(s) * sum_{m>0} 2 p(m) s^{2m}.
    """
    f0 = build_f0(n)
    phis = phi_series(n, budget)
    base = f0 * phis
    p = build_partition(n)
    deg_coeffs = [IntPoly()] * (n + 1)
    for m in range(1, n // 2 + 1):
        count = count_degenerate(2 * m)
        if count != p[m](0):
            raise AssertionError(f"degenerate count {count} != p({m})")
        deg_coeffs[2 * m] = IntPoly.const(2 * count)
    deg = TruncSeries(n, deg_coeffs)
    return base[n], (base * deg)[n]


def dprime_convolution(n: int, budget: int | None = None) -> IntPoly:
    """d'_n = a_n + b_n / 2 as a polynomial in u; the halving must be exact."""
    a, b = dprime_parts(n, budget)
    return a + b.exact_div(2)
