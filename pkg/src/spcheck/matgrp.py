"""Brute-force oracle over explicit symplectic matrices.

Matrices are tuples of row tuples of field element codes.  The form is
<u, v> = u^T Omega v with Omega = [[0, -J], [J, 0]] and J the n x n
antidiagonal identity.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from ._budget import BudgetExceeded
from .classparams import AutSpec, SpClassParam, WittClass, validate
from .gf import GF, FrobOrbit, factor_poly, field_of_order, trim

Mat = tuple[tuple[int, ...], ...]

DEFAULT_CAP = 100_000


# -- basic matrix arithmetic ---------------------------------------------------

def identity(F: GF, N: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(N)) for i in range(N))


def scalar(F: GF, N: int, c: int) -> Mat:
    return tuple(tuple(c if i == j else 0 for j in range(N)) for i in range(N))


def transpose(M: Mat) -> Mat:
    return tuple(zip(*M))


def mat_mul(F: GF, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Mat:
    add, mul = F.add_table, F.mul_table
    cols = list(zip(*B))
    if add is None:
        out = []
        for row in A:
            r = []
            for col in cols:
                acc = 0
                for a, b in zip(row, col):
                    if a and b:
                        acc = F.add(acc, F.mul(a, b))
                r.append(acc)
            out.append(tuple(r))
        return tuple(out)
    out = []
    for row in A:
        r = []
        for col in cols:
            acc = 0
            for a, b in zip(row, col):
                if a and b:
                    acc = add[acc][mul[a][b]]
            r.append(acc)
        out.append(tuple(r))
    return tuple(out)


def mat_add(F: GF, A: Mat, B: Mat) -> Mat:
    return tuple(tuple(F.add(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(F: GF, A: Mat, B: Mat) -> Mat:
    return tuple(tuple(F.sub(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(F: GF, A: Mat, c: int) -> Mat:
    return tuple(tuple(F.mul(c, a) for a in row) for row in A)


def mat_pow(F: GF, A: Mat, e: int) -> Mat:
    result = identity(F, len(A))
    while e:
        if e & 1:
            result = mat_mul(F, result, A)
        A = mat_mul(F, A, A)
        e >>= 1
    return result


def mat_apply(F: GF, M: Mat, f: Sequence[int]) -> Mat:
    """f(M) for a polynomial f (constant term first), by Horner."""
    N = len(M)
    acc = scalar(F, N, 0)
    for c in reversed(trim(f)):
        acc = mat_add(F, mat_mul(F, acc, M), scalar(F, N, c))
    return acc


def entrywise(F: GF, M: Mat, fn) -> Mat:
    return tuple(tuple(fn(a) for a in row) for row in M)


def rref(F: GF, rows: Iterable[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    A = [list(r) for r in rows]
    pivots: list[int] = []
    if not A:
        return A, pivots
    ncols = len(A[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        s = F.inv(A[r][c])
        A[r] = [F.mul(s, x) for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = F.neg(A[i][c])
                A[i] = [F.add(x, F.mul(f, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(F: GF, M: Sequence[Sequence[int]]) -> int:
    return len(rref(F, M)[1])


def kernel(F: GF, M: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of {x : M x = 0} as a list of vectors."""
    ncols = len(M[0])
    R, pivots = rref(F, M)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(R, pivots):
            v[pc] = F.neg(row[f])
        basis.append(v)
    return basis


def mat_vec(F: GF, M: Mat, v: Sequence[int]) -> list[int]:
    return [col[0] for col in mat_mul(F, M, tuple((x,) for x in v))]


def determinant(F: GF, M: Sequence[Sequence[int]]) -> int:
    A = [list(r) for r in M]
    n = len(A)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = F.neg(det)
        det = F.mul(det, A[c][c])
        s = F.inv(A[c][c])
        for i in range(c + 1, n):
            if A[i][c]:
                f = F.neg(F.mul(A[i][c], s))
                A[i] = [F.add(x, F.mul(f, y)) for x, y in zip(A[i], A[c])]
    return det


def inverse(F: GF, M: Mat) -> Mat:
    N = len(M)
    aug = [list(row) + [1 if i == j else 0 for j in range(N)] for i, row in enumerate(M)]
    R, pivots = rref(F, aug)
    if pivots[:N] != list(range(N)):
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(r[N:]) for r in R)


def charpoly(F: GF, M: Mat) -> tuple[int, ...]:
    """Characteristic polynomial det(xI - M), via Hessenberg reduction."""
    n = len(M)
    H = [list(r) for r in M]
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if H[i][m - 1]), None)
        if piv is None:
            continue
        if piv != m:
            H[m], H[piv] = H[piv], H[m]
            for row in H:
                row[m], row[piv] = row[piv], row[m]
        s = F.inv(H[m][m - 1])
        for i in range(m + 1, n):
            if H[i][m - 1]:
                u = F.mul(H[i][m - 1], s)
                H[i] = [F.sub(a, F.mul(u, b)) for a, b in zip(H[i], H[m])]
                for row in H:
                    row[m] = F.add(row[m], F.mul(u, row[i]))
    # p_k = (x - h_kk) p_{k-1} - sum_i h_ik (prod sub-diagonal) p_{i-1}
    polys: list[list[int]] = [[1]]
    for k in range(n):
        pk = [0] + polys[k]
        hkk = F.neg(H[k][k])
        for i, c in enumerate(polys[k]):
            pk[i] = F.add(pk[i], F.mul(hkk, c))
        t = 1
        for i in range(k - 1, -1, -1):
            t = F.mul(t, H[i + 1][i])
            if not t:
                break
            coef = F.neg(F.mul(t, H[i][k]))
            for idx, c in enumerate(polys[i]):
                pk[idx] = F.add(pk[idx], F.mul(coef, c))
        polys.append(pk)
    return tuple(polys[n])


# -- the form ------------------------------------------------------------------

@dataclass(frozen=True)
class SympForm:
    n: int
    gram: Mat

    @classmethod
    def standard(cls, F: GF, n: int) -> "SympForm":
        return cls(n, _gram(F, n))


@lru_cache(maxsize=None)
def _gram(F: GF, n: int) -> Mat:
    N = 2 * n
    G = [[0] * N for _ in range(N)]
    minus = F.neg(1)
    for i in range(n):
        G[i][N - 1 - i] = minus
        G[n + i][n - 1 - i] = 1
    return tuple(tuple(r) for r in G)


def _check_even_square(M: Mat) -> int:
    N = len(M)
    if N % 2 or any(len(r) != N for r in M):
        raise ValueError("expected a square matrix of even dimension")
    return N // 2


def is_conformal(F: GF, M: Mat) -> int | None:
    """Multiplier c with M^T Omega M = c Omega, or None."""
    n = _check_even_square(M)
    G = _gram(F, n)
    T = mat_mul(F, mat_mul(F, transpose(M), G), M)
    c = F.neg(T[0][2 * n - 1])
    if c == 0:
        return None
    return c if T == mat_scale(F, G, c) else None


def is_symplectic(F: GF, M: Mat) -> bool:
    return is_conformal(F, M) == 1


def c_lambda(F: GF, n: int, lam: int) -> Mat:
    """diag(lam I_n, I_n), a conformal element with multiplier lam."""
    return tuple(tuple((lam if i < n else 1) if i == j else 0 for j in range(2 * n))
                 for i in range(2 * n))


def block_diag_D(F: GF, A: Mat) -> Mat:
    """D(A) = diag(A, J A^{-T} J), the Levi embedding of GL_n."""
    n = len(A)
    Ainv_T = transpose(inverse(F, A))
    B = tuple(tuple(Ainv_T[n - 1 - i][n - 1 - j] for j in range(n)) for i in range(n))
    out = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            out[i][j] = A[i][j]
            out[n + i][n + j] = B[i][j]
    return tuple(tuple(r) for r in out)


def symplectic_inverse(F: GF, M: Mat) -> Mat:
    """M^{-1} = Omega^{-1} M^T Omega for symplectic M."""
    n = len(M) // 2
    G = _gram(F, n)
    Ginv = mat_scale(F, G, F.neg(1))  # Omega^2 = -I
    return mat_mul(F, mat_mul(F, Ginv, transpose(M)), G)


# -- group enumeration ---------------------------------------------------------

def sp_order(n: int, q: int) -> int:
    order = q ** (n * n)
    for i in range(1, n + 1):
        order *= q ** (2 * i) - 1
    return order


def standard_generators(F: GF, n: int) -> list[Mat]:
    """x_a(1) for the simple roots and their negatives, plus a torus element."""
    N = 2 * n
    gens: list[Mat] = []
    for i in range(n - 1):
        A = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
        A[i][i + 1] = 1
        A = tuple(tuple(r) for r in A)
        gens.append(block_diag_D(F, A))
        gens.append(block_diag_D(F, transpose(A)))
    E = [list(r) for r in identity(F, N)]
    E[n - 1][n] = 1
    long_root = tuple(tuple(r) for r in E)
    gens.append(long_root)
    gens.append(transpose(long_root))
    if F.q > 3:
        t = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
        t[0][0] = F.primitive
        gens.append(block_diag_D(F, tuple(tuple(r) for r in t)))
    for g in gens:
        assert is_symplectic(F, g), g
    return gens


@dataclass
class GroupEnum:
    field: GF
    n: int
    generators: list[Mat]
    elements: list[Mat]

    @property
    def order(self) -> int:
        return len(self.elements)


def enumerate_group(n: int, field: GF | int, cap: int = DEFAULT_CAP) -> GroupEnum:
    """Closure of the standard generators, breadth first from the identity."""
    F = field if isinstance(field, GF) else field_of_order(field)
    expected = sp_order(n, F.q)
    if expected > cap:
        raise BudgetExceeded(f"|Sp_{2 * n}({F.q})| = {expected} exceeds cap {cap}",
                             needed=expected, budget=cap, progress={"n": n, "q": F.q})
    gens = standard_generators(F, n)
    start = identity(F, 2 * n)
    seen = {start}
    order = [start]
    i = 0
    while i < len(order):
        g = order[i]
        i += 1
        for s in gens:
            h = mat_mul(F, g, s)
            if h not in seen:
                seen.add(h)
                order.append(h)
    if len(order) != expected:
        raise AssertionError(f"closure has {len(order)} elements, expected {expected}")
    return GroupEnum(F, n, gens, order)


def random_symplectic(F: GF, n: int, rng: random.Random, steps: int = 40) -> Mat:
    """A random word in the standard generators and their inverses."""
    gens = standard_generators(F, n)
    gens = gens + [symplectic_inverse(F, g) for g in gens]
    M = identity(F, 2 * n)
    for _ in range(steps):
        M = mat_mul(F, M, rng.choice(gens))
    return M


# -- Wall parameters from a matrix ---------------------------------------------

@lru_cache(maxsize=4096)
def _factor_cached(F: GF, f: tuple[int, ...]) -> tuple:
    return tuple(factor_poly(F, f))


def _complement(F: GF, sub_basis: list[list[int]], ambient_basis: list[list[int]]) -> list[list[int]]:
    """Vectors from ``ambient_basis`` completing ``sub_basis`` to a basis of the ambient span."""
    current = [list(v) for v in sub_basis]
    r = rank(F, current) if current else 0
    chosen = []
    for v in ambient_basis:
        if rank(F, current + [v]) > r:
            current.append(v)
            chosen.append(v)
            r += 1
    return chosen


def _bilinear(F: GF, u: Sequence[int], A: Mat, v: Sequence[int]) -> int:
    acc = 0
    for x, row in zip(u, A):
        if x:
            for y, a in zip(v, row):
                if y and a:
                    acc = F.add(acc, F.mul(x, F.mul(a, y)))
    return acc


def _witt_class(F: GF, M: Mat, Minv: Mat, eps: int, j: int, kernels: dict) -> WittClass:
    """Square class of the form <(M - M^-1)^{2j-1} u, v> on K_2j / (K_{2j-1} + (M-eps) K_{2j+1}).

    ``kernels[i]`` is a basis of K_i = ker (M - eps)^i.
    """
    N = len(M)
    shifted = mat_sub(F, M, scalar(F, N, eps))
    K = kernels
    image = [mat_vec(F, shifted, v) for v in K[2 * j + 1]]
    W = [v for v in K[2 * j - 1]] + image
    W_basis = rref(F, W)[0] if W else []
    comp = _complement(F, W_basis, K[2 * j])
    A = mat_pow(F, mat_sub(F, M, Minv), 2 * j - 1)
    form = mat_mul(F, transpose(A), _gram(F, N // 2))

    def gram_det(vectors):
        G = [[_bilinear(F, u, form, v) for v in vectors] for u in vectors]
        if any(G[a][b] != G[b][a] for a in range(len(G)) for b in range(len(G))):
            raise AssertionError("induced form is not symmetric")
        return determinant(F, G)

    d1 = gram_det(comp)
    # a second complement: shift by vectors of W and mix the basis
    alt = [list(v) for v in comp]
    for a in range(len(alt)):
        if W_basis:
            alt[a] = [F.add(x, y) for x, y in zip(alt[a], W_basis[a % len(W_basis)])]
        if a + 1 < len(alt):
            alt[a] = [F.add(x, y) for x, y in zip(alt[a], comp[a + 1])]
    d2 = gram_det(alt)
    if d1 == 0 or d2 == 0:
        raise AssertionError("induced form is degenerate")
    if F.is_square(d1) != F.is_square(d2):
        raise AssertionError("Witt class depends on the chosen complement")
    return WittClass.SQUARE if F.is_square(d1) else WittClass.NONSQUARE


def wall_params_of(F: GF, M: Mat, check: bool = True) -> SpClassParam:
    n = _check_even_square(M)
    if check and not is_symplectic(F, M):
        raise ValueError("matrix is not symplectic")
    N = 2 * n
    m_entries = []
    psi: dict[int, list] = {1: [], -1: []}
    Minv = None
    for P, e in _factor_cached(F, charpoly(F, M)):
        deg = len(P) - 1
        PM = mat_apply(F, M, P)
        kernels: dict[int, list[list[int]]] = {0: []}
        r = [0]
        power = identity(F, N)
        for i in range(1, e + 2):
            power = mat_mul(F, power, PM)
            kernels[i] = kernel(F, power) if rank(F, power) < N else []
            r.append(len(kernels[i]))
        orbit = FrobOrbit(F, P)
        for j in range(1, e + 1):
            blocks, rem = divmod(2 * r[j] - r[j - 1] - r[j + 1], deg)
            if rem:
                raise AssertionError("nullity pattern is not a multiple of the degree")
            if blocks:
                m_entries.append((orbit, j, blocks))
        if deg == 1 and P[0] in (F.neg(1), 1):
            eps = 1 if P[0] == F.neg(1) else -1
            eps_val = 1 if eps == 1 else F.neg(1)
            if Minv is None:
                Minv = symplectic_inverse(F, M)
            for orb, j, k in list(m_entries):
                # kernels are known through e + 1 >= j + 1
                if orb == orbit and j % 2 == 0:
                    psi[eps].append((j // 2, _witt_class(F, M, Minv, eps_val, j // 2, kernels)))
    param = SpClassParam.make(n, F, m_entries, psi[1], psi[-1])
    if check:
        v = validate(param)
        if not v:
            raise AssertionError(f"matrix produced an invalid parameter: {v.violations}")
    return param


# -- automorphisms and census --------------------------------------------------

def diagonal_conjugate(F: GF, M: Mat, lam: int | None = None) -> Mat:
    """c_lam M c_lam^{-1}; lam defaults to the smallest nonsquare."""
    n = len(M) // 2
    lam = F.smallest_nonsquare if lam is None else lam
    c = c_lambda(F, n, lam)
    ci = c_lambda(F, n, F.inv(lam))
    return mat_mul(F, mat_mul(F, c, M), ci)


def field_power(F: GF, M: Mat, q1: int) -> Mat:
    if not F.is_power_of(q1):
        raise ValueError(f"q = {F.q} is not a power of {q1}")
    return entrywise(F, M, lambda a: F.pow(a, q1))


def apply_aut_matrix(F: GF, M: Mat, aut: AutSpec) -> Mat:
    if aut.diagonal:
        M = diagonal_conjugate(F, M)
    return field_power(F, M, aut.q1)


@dataclass
class Census:
    field: GF
    n: int
    sizes: dict[SpClassParam, int]
    representatives: dict[SpClassParam, Mat]

    @property
    def class_count(self) -> int:
        return len(self.sizes)

    def to_json_obj(self) -> list[dict]:
        rows = [{"param": k.to_dict(), "size": v} for k, v in self.sizes.items()]
        return sorted(rows, key=lambda r: _param_sort_key(r["param"]))


def _param_sort_key(d: dict) -> str:
    return json.dumps(d, sort_keys=True)


def oracle_class_census(n: int, field: GF | int, cap: int = DEFAULT_CAP) -> Census:
    """Wall parameters of every element; cached per (n, field, cap)."""
    return _census(n, field if isinstance(field, GF) else field_of_order(field), cap)


@lru_cache(maxsize=4)
def _census(n: int, field: GF, cap: int) -> Census:
    G = enumerate_group(n, field, cap)
    F = G.field
    sizes: Counter = Counter()
    reps: dict[SpClassParam, Mat] = {}
    for g in G.elements:
        k = wall_params_of(F, g, check=False)
        sizes[k] += 1
        reps.setdefault(k, g)
    if sum(sizes.values()) != G.order:
        raise AssertionError("census sizes do not add up to the group order")
    for k in reps:
        if not validate(k):
            raise AssertionError(f"invalid census key {k}")
    return Census(F, n, dict(sizes), reps)


def oracle_invariant_count(n: int, field: GF | int, aut: AutSpec,
                           cap: int = DEFAULT_CAP, census: Census | None = None) -> int:
    F = field if isinstance(field, GF) else field_of_order(field)
    aut.check(F)
    census = census or oracle_class_census(n, F, cap)
    count = 0
    for key, g in census.representatives.items():
        image = apply_aut_matrix(census.field, g, aut)
        count += wall_params_of(census.field, image, check=False) == key
    return count
