"""Monomial matrices in Sp_2l(Z) and the Chevalley elements n_a(t), h_a(-1).

Basis order is e_1, ..., e_l, e_-l, ..., e_-1, the same as the symplectic
form used by the matrix oracle: <e_i, e_-i> = -1 for i > 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .signed import SignedPerm

Root = tuple[int, ...]  # coefficients on e_1..e_l


def pos(i: int, l: int) -> int:
    """Matrix index of the basis vector e_i, i in +-{1..l}."""
    return i - 1 if i > 0 else 2 * l + i


def label(c: int, l: int) -> int:
    return c + 1 if c < l else c - 2 * l


@dataclass(frozen=True)
class MonomialMat:
    """A 2l x 2l monomial matrix with entries +-1.

    ``cols[c] = s * (r + 1)`` means M e_c = s e_r (matrix indices).
    """

    cols: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.cols)

    @property
    def l(self) -> int:
        return len(self.cols) // 2

    @classmethod
    def identity(cls, l: int) -> "MonomialMat":
        return cls(tuple(range(1, 2 * l + 1)))

    @classmethod
    def from_dense(cls, M: Sequence[Sequence[int]]) -> "MonomialMat":
        N = len(M)
        cols = []
        for c in range(N):
            nz = [(r, M[r][c]) for r in range(N) if M[r][c]]
            if len(nz) != 1 or nz[0][1] not in (1, -1):
                raise ValueError("matrix is not monomial with +-1 entries")
            r, s = nz[0]
            cols.append(s * (r + 1))
        return cls(tuple(cols))

    def dense(self) -> list[list[int]]:
        N = self.size
        M = [[0] * N for _ in range(N)]
        for c, x in enumerate(self.cols):
            M[abs(x) - 1][c] = 1 if x > 0 else -1
        return M

    def __mul__(self, other: "MonomialMat") -> "MonomialMat":
        a = self.cols
        out = []
        for x in other.cols:
            y = a[abs(x) - 1]
            out.append(y if x > 0 else -y)
        return MonomialMat(tuple(out))

    def inverse(self) -> "MonomialMat":
        inv = [0] * self.size
        for c, x in enumerate(self.cols):
            inv[abs(x) - 1] = (c + 1) if x > 0 else -(c + 1)
        return MonomialMat(tuple(inv))

    def __pow__(self, e: int) -> "MonomialMat":
        base = self if e >= 0 else self.inverse()
        out = MonomialMat.identity(self.l)
        for _ in range(abs(e)):
            out = out * base
        return out

    def conj(self, y: "MonomialMat") -> "MonomialMat":
        """x^y = y^-1 x y."""
        return y.inverse() * self * y

    def is_diagonal(self) -> bool:
        return all(abs(x) == c + 1 for c, x in enumerate(self.cols))

    def rho(self) -> SignedPerm:
        """Image in the signed permutation group (signs of entries dropped)."""
        l = self.l
        return SignedPerm(tuple(label(abs(self.cols[pos(i, l)]) - 1, l) for i in range(1, l + 1)))

    def support(self) -> set[int]:
        """Labels i > 0 such that M moves e_i or e_-i (up to sign counts as moving)."""
        l = self.l
        out = set()
        for i in range(1, l + 1):
            for j in (i, -i):
                if self.cols[pos(j, l)] != pos(j, l) + 1:
                    out.add(i)
        return out


# -- dense integer helpers -----------------------------------------------------

def _eye(N: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(N)] for i in range(N)]


def _mul(A, B):
    N = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(N)) for j in range(N)] for i in range(N)]


def _add(A, B, t=1):
    return [[a + t * b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _transpose(A):
    return [list(r) for r in zip(*A)]


@lru_cache(maxsize=None)
def gram(l: int) -> tuple[tuple[int, ...], ...]:
    N = 2 * l
    G = [[0] * N for _ in range(N)]
    for i in range(l):
        G[i][N - 1 - i] = -1
        G[l + i][l - 1 - i] = 1
    return tuple(tuple(r) for r in G)


def is_symplectic_int(M) -> bool:
    G = [list(r) for r in gram(len(M) // 2)]
    return _mul(_mul(_transpose(M), G), M) == G


# -- roots ---------------------------------------------------------------------

def roots(l: int) -> list[Root]:
    """All roots of C_l: +-e_i +- e_j (i < j) and +-2e_i."""
    out = []
    for i in range(l):
        for j in range(i + 1, l):
            for si in (1, -1):
                for sj in (1, -1):
                    r = [0] * l
                    r[i], r[j] = si, sj
                    out.append(tuple(r))
        for s in (2, -2):
            r = [0] * l
            r[i] = s
            out.append(tuple(r))
    return out


def simple_roots(l: int) -> list[Root]:
    out = []
    for i in range(l - 1):
        r = [0] * l
        r[i], r[i + 1] = 1, -1
        out.append(tuple(r))
    r = [0] * l
    r[l - 1] = 2
    out.append(tuple(r))
    return out


def _check_root(alpha: Root) -> None:
    l = len(alpha)
    if tuple(alpha) not in set(roots(l)):
        raise ValueError(f"{alpha} is not a root of type C_{l}")


def reflect(beta: Root, alpha: Root) -> Root:
    """s_beta(alpha) with the standard inner product."""
    num = 2 * sum(a * b for a, b in zip(alpha, beta))
    den = sum(b * b for b in beta)
    k = num // den
    return tuple(a - k * b for a, b in zip(alpha, beta))


def _weights(alpha: Root) -> tuple[int, int] | tuple[int]:
    """Write alpha as e_a - e_b with labels a, b in +-{1..l} (e_-i = -e_i)."""
    nz = [(i + 1, c) for i, c in enumerate(alpha) if c]
    if len(nz) == 1:
        i, c = nz[0]
        return (i,) if c > 0 else (-i,)
    (i, ci), (j, cj) = nz
    a = i if ci > 0 else -i
    b = -j if cj > 0 else j
    return (a, b)


@lru_cache(maxsize=None)
def root_element(alpha: Root) -> tuple[tuple[int, ...], ...]:
    """The nilpotent X_alpha in sp_2l(Z) with x_alpha(t) = I + t X_alpha.

    Short roots e_a - e_b send e_b to e_a and e_-a to +-e_-b, with the sign
    fixed by requiring the form to be preserved.  Long roots 2e_a send
    e_-a to e_a.  Negative roots use the transpose, which keeps
    [X_alpha, X_-alpha] the standard coroot.
    """
    _check_root(alpha)
    l = len(alpha)
    N = 2 * l
    if _is_negative(alpha):
        return tuple(tuple(r) for r in _transpose(root_element(tuple(-c for c in alpha))))
    w = _weights(alpha)
    X = [[0] * N for _ in range(N)]
    if len(w) == 1:
        a = w[0]
        X[pos(a, l)][pos(-a, l)] = 1
    else:
        a, b = w
        X[pos(a, l)][pos(b, l)] = 1
        for sign in (1, -1):
            X[pos(-b, l)][pos(-a, l)] = sign
            if is_symplectic_int(_add(_eye(N), X)):
                break
        else:
            raise AssertionError(f"no sign makes x_{alpha}(1) symplectic")
    if not is_symplectic_int(_add(_eye(N), X)):
        raise AssertionError(f"x_{alpha}(1) is not symplectic")
    return tuple(tuple(r) for r in X)


def _is_negative(alpha: Root) -> bool:
    first = next(c for c in alpha if c)
    return first < 0


def x_root(alpha: Root, t: int) -> list[list[int]]:
    X = root_element(tuple(alpha))
    return _add(_eye(len(X)), X, t)


def chevalley_n(alpha: Root, t: int = 1) -> MonomialMat:
    """n_alpha(t) = x_alpha(t) x_-alpha(-1/t) x_alpha(t) for t = +-1."""
    if t not in (1, -1):
        raise ValueError("only t = +-1 gives an integral monomial matrix")
    alpha = tuple(alpha)
    neg = tuple(-c for c in alpha)
    M = _mul(_mul(x_root(alpha, t), x_root(neg, -t)), x_root(alpha, t))
    return MonomialMat.from_dense(M)


def chevalley_h(alpha: Root) -> MonomialMat:
    """h_alpha(-1) = n_alpha(-1)^2."""
    n = chevalley_n(alpha, -1)
    return n * n


def e_root(l: int, i: int, scale: int = 2) -> Root:
    r = [0] * l
    r[i - 1] = scale
    return tuple(r)
