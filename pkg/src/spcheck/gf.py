"""Exact arithmetic in odd finite fields and polynomials over them.

Elements of F_q (q = p^m) are plain ints in ``range(q)``: the base-p digits of
an element are the coefficients of its residue modulo the field's defining
polynomial, constant term first.  The prime subfield is therefore ``range(p)``
with ordinary residue arithmetic, and ``p - 1`` is always ``-1``.

Polynomials over a field are tuples of element codes, constant term first,
with no trailing zeros (the zero polynomial is ``()``).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from math import gcd
from typing import Iterator, Sequence

MAX_Q = 1 << 20
TABLE_Q = 729  # full add/mul tables up to this size

Poly = tuple


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, m)`` with ``q == p**m``; raise ValueError otherwise."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in itertools.count(2) if q % d == 0)
    m, r = 0, q
    while r % p == 0:
        r //= p
        m += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, m


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class GF:
    """The field F_q with q = p^m, p an odd prime.

    ``modulus`` is the monic irreducible of degree m over F_p defining the
    extension (constant term first).  By default the smallest one in the
    (degree, coefficients from the top) order is used, so element codes are
    reproducible across runs.
    """

    def __init__(self, p: int, m: int = 1, modulus: Sequence[int] | None = None,
                 max_q: int = MAX_Q):
        if not isinstance(p, int) or not is_prime(p):
            raise ValueError(f"characteristic must be prime, got {p!r}")
        if p == 2:
            raise ValueError("characteristic 2 is not supported")
        if not isinstance(m, int) or m < 1:
            raise ValueError(f"exponent must be a positive integer, got {m!r}")
        q = p ** m
        if q > max_q:
            raise ValueError(f"q = {q} exceeds the configured bound {max_q}")
        self.p, self.m, self.q = p, m, q

        if m == 1:
            if modulus is not None and tuple(modulus) != (0, 1):
                raise ValueError("a prime field takes no modulus")
            self.modulus: Poly = (0, 1)
        else:
            prime = GF(p)
            if modulus is None:
                modulus = next(irreducible_polys(prime, m, include_x=False))
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree m")
            if not is_irreducible(prime, modulus):
                raise ValueError(f"modulus {modulus} is reducible over F_{p}")
            self.modulus = modulus

        self._digits = [self._to_digits(a) for a in range(q)] if m > 1 else None
        self._build_tables()

    # -- construction helpers -------------------------------------------------

    @classmethod
    def of_order(cls, q: int, **kw) -> "GF":
        p, m = prime_power(q)
        return cls(p, m, **kw)

    def _to_digits(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def _from_digits(self, ds: Sequence[int]) -> int:
        a = 0
        for d in reversed(ds):
            a = a * self.p + d
        return a

    def _slow_mul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        da, db = self._digits[a], self._digits[b]
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        mod = self.modulus
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k]
            if c:
                for i in range(m + 1):
                    prod[k - m + i] = (prod[k - m + i] - c * mod[i]) % p
        return self._from_digits(prod[:m])

    def _build_tables(self) -> None:
        p, q = self.p, self.q
        if self.m == 1:
            g = next(c for c in range(1, p)
                     if all(pow(c, (p - 1) // r, p) != 1 for r in _prime_factors(p - 1)))
            exp = [1] * (q - 1)
            for i in range(1, q - 1):
                exp[i] = exp[i - 1] * g % p
        else:
            factors = _prime_factors(q - 1)
            g = None
            for c in itertools.chain((p,), range(2, q)):
                if all(self._slow_pow(c, (q - 1) // r) != 1 for r in factors):
                    g = c
                    break
            step = self._times_root if g == p else (lambda a: self._slow_mul(a, g))
            exp = [1] * (q - 1)
            for i in range(1, q - 1):
                exp[i] = step(exp[i - 1])
        log = [0] * q
        for i, e in enumerate(exp):
            log[e] = i
        self.primitive = g
        self._exp, self._log = exp, log

        if q <= TABLE_Q:
            self.add_table = [[self._add(a, b) for b in range(q)] for a in range(q)]
            self.mul_table = [[self._mul(a, b) for b in range(q)] for a in range(q)]
        else:
            self.add_table = self.mul_table = None
        self.neg_table = [self._neg(a) for a in range(q)]
        self.inv_table = [0] + [exp[(-log[a]) % (q - 1)] for a in range(1, q)]

    def _times_root(self, a: int) -> int:
        # multiply by the class of x: shift digits, reduce the top one
        p, m = self.p, self.m
        top, low = divmod(a, p ** (m - 1))
        a = low * p
        if top:
            mod = self.modulus
            a = self._from_digits([(d - top * mod[i]) % p
                                   for i, d in enumerate(self._digits[a])])
        return a

    def _slow_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    def _add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        p = self.p
        return self._from_digits([(x + y) % p for x, y in zip(self._digits[a], self._digits[b])])

    def _neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        p = self.p
        return self._from_digits([(-x) % p for x in self._digits[a]])

    def _mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    # -- arithmetic -----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        t = self.add_table
        return t[a][b] if t is not None else self._add(a, b)

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg_table[b])

    def mul(self, a: int, b: int) -> int:
        t = self.mul_table
        return t[a][b] if t is not None else self._mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def log(self, a: int) -> int:
        """Discrete log to the base ``self.primitive``."""
        if a == 0:
            raise ValueError("log of zero")
        return self._log[a]

    def element(self, n: int) -> int:
        """Image of the integer ``n`` in the prime subfield."""
        return n % self.p

    def frobenius(self, a: int, q1: int) -> int:
        return self.pow(a, q1)

    def is_square(self, a: int) -> bool:
        if a == 0:
            raise ValueError("is_square is defined on nonzero elements only")
        return self._log[a] % 2 == 0

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    @cached_property
    def smallest_nonsquare(self) -> int:
        return next(a for a in self.nonzero() if not self.is_square(a))

    def multiplicative_order(self, a: int) -> int:
        return (self.q - 1) // gcd(self._log[a], self.q - 1)

    def subfield_orders(self) -> list[int]:
        """All q1 >= 3 with q a power of q1."""
        return [self.p ** k for k in range(1, self.m + 1) if self.m % k == 0]

    def is_power_of(self, q1: int) -> bool:
        return q1 in self.subfield_orders()

    # -- identity -------------------------------------------------------------

    def _key(self):
        return (self.p, self.m, self.modulus)

    def __eq__(self, other):
        return isinstance(other, GF) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.q})"
        return f"GF({self.p}^{self.m}, modulus={self.modulus})"

    def __getstate__(self):
        return {"p": self.p, "m": self.m, "modulus": self.modulus}

    def __setstate__(self, state):
        self.__init__(state["p"], state["m"], state["modulus"] if state["m"] > 1 else None)


_FIELD_CACHE: dict[tuple, GF] = {}


def build_field(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> GF:
    """Cached :class:`GF` constructor; fields with equal data are shared."""
    key = (p, m, tuple(modulus) if modulus is not None else None)
    F = _FIELD_CACHE.get(key)
    if F is None:
        F = _FIELD_CACHE[key] = GF(p, m, modulus)
    return F


def field_of_order(q: int) -> GF:
    p, m = prime_power(q)
    return build_field(p, m)


# -- polynomials ---------------------------------------------------------------

def trim(f: Sequence[int]) -> Poly:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return tuple(f)


def degree(f: Poly) -> int:
    return len(f) - 1


def poly_key(f: Poly) -> tuple:
    """Canonical order: degree first, then coefficients read from the top."""
    return (len(f), tuple(reversed(f)))


def poly_add(F: GF, f: Poly, g: Poly) -> Poly:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = F.add(out[i], c)
    return trim(out)


def poly_neg(F: GF, f: Poly) -> Poly:
    return tuple(F.neg(c) for c in f)


def poly_sub(F: GF, f: Poly, g: Poly) -> Poly:
    return poly_add(F, f, poly_neg(F, g))


def poly_scale(F: GF, f: Poly, c: int) -> Poly:
    if c == 0:
        return ()
    return tuple(F.mul(a, c) for a in f)


def poly_mul(F: GF, f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return ()
    add, mul = F.add, F.mul
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = add(out[i + j], mul(a, b))
    return trim(out)


def poly_divmod(F: GF, f: Poly, g: Poly) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    add, mul, neg = F.add, F.mul, F.neg
    r = list(f)
    dg = len(g) - 1
    inv_lead = F.inv(g[-1])
    qt = [0] * max(len(f) - dg, 0)
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k]
        if c == 0:
            continue
        c = mul(c, inv_lead)
        qt[k - dg] = c
        nc = neg(c)
        for i in range(dg + 1):
            if g[i]:
                r[k - dg + i] = add(r[k - dg + i], mul(nc, g[i]))
    return trim(qt), trim(r[:dg])


def poly_mod(F: GF, f: Poly, g: Poly) -> Poly:
    return poly_divmod(F, f, g)[1]


def poly_monic(F: GF, f: Poly) -> Poly:
    if not f:
        return ()
    return poly_scale(F, f, F.inv(f[-1]))


def poly_gcd(F: GF, f: Poly, g: Poly) -> Poly:
    while g:
        f, g = g, poly_mod(F, f, g)
    return poly_monic(F, f)


def poly_powmod(F: GF, f: Poly, e: int, mod: Poly) -> Poly:
    result: Poly = (1,)
    base = poly_mod(F, f, mod)
    while e:
        if e & 1:
            result = poly_mod(F, poly_mul(F, result, base), mod)
        base = poly_mod(F, poly_mul(F, base, base), mod)
        e >>= 1
    return poly_mod(F, result, mod)


def poly_eval(F: GF, f: Poly, x: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def poly_deriv(F: GF, f: Poly) -> Poly:
    return trim([F.mul(F.element(i), c) for i, c in enumerate(f)][1:])


def poly_pth_root(F: GF, f: Poly) -> Poly:
    """g with g^p = f, for f whose exponents are all multiples of p."""
    p = F.p
    root_exp = F.q // p  # a -> a^(q/p) inverts a -> a^p
    return trim([F.pow(f[i], root_exp) for i in range(0, len(f), p)])


def is_irreducible(F: GF, f: Poly) -> bool:
    """Rabin's test."""
    f = poly_monic(F, trim(f))
    n = degree(f)
    if n <= 0:
        return False
    if n == 1:
        return True
    x: Poly = (0, 1)

    def frob_power(k):
        h = x
        for _ in range(k):
            h = poly_powmod(F, h, F.q, f)
        return h

    for r in _prime_factors(n):
        h = frob_power(n // r)
        if degree(poly_gcd(F, f, poly_sub(F, h, x))) != 0:
            return False
    return poly_sub(F, frob_power(n), x) == ()


def irreducible_polys(F: GF, d: int, include_x: bool = False) -> Iterator[Poly]:
    """Monic irreducibles of degree ``d`` in canonical order."""
    for top in itertools.product(range(F.q), repeat=d):
        f = tuple(reversed(top)) + (1,)
        if f[0] == 0 and not (include_x and d == 1):
            continue
        if is_irreducible(F, f):
            yield f


def self_reciprocal_candidates(F: GF, e: int) -> Iterator[Poly]:
    """Monic palindromic polynomials of degree 2e with constant term 1."""
    for top in itertools.product(range(F.q), repeat=e):
        half = (1,) + tuple(reversed(top))
        yield half + tuple(reversed(half[:-1]))


def _square_free(F: GF, f: Poly) -> list[tuple[Poly, int]]:
    out: list[tuple[Poly, int]] = []
    if degree(f) <= 0:
        return out
    fd = poly_deriv(F, f)
    if not fd:
        for h, e in _square_free(F, poly_pth_root(F, f)):
            out.append((h, e * F.p))
        return out
    c = poly_gcd(F, f, fd)
    w = poly_divmod(F, f, c)[0]
    i = 1
    while degree(w) > 0:
        y = poly_gcd(F, w, c)
        z = poly_divmod(F, w, y)[0]
        if degree(z) > 0:
            out.append((poly_monic(F, z), i))
        i += 1
        w = y
        c = poly_divmod(F, c, y)[0]
    if degree(c) > 0:
        for h, e in _square_free(F, poly_pth_root(F, poly_monic(F, c))):
            out.append((h, e * F.p))
    return out


def _distinct_degree(F: GF, f: Poly) -> list[tuple[Poly, int]]:
    x: Poly = (0, 1)
    out = []
    h = x
    i = 1
    while degree(f) >= 2 * i:
        h = poly_powmod(F, h, F.q, f)
        g = poly_gcd(F, f, poly_sub(F, h, x))
        if degree(g) > 0:
            out.append((g, i))
            f = poly_divmod(F, f, g)[0]
            h = poly_mod(F, h, f)
        i += 1
    if degree(f) > 0:
        out.append((poly_monic(F, f), degree(f)))
    return out


def _equal_degree(F: GF, f: Poly, d: int, rng: random.Random) -> list[Poly]:
    if degree(f) == d:
        return [f]
    n = degree(f)
    e = (F.q ** d - 1) // 2
    while True:
        a = trim([rng.randrange(F.q) for _ in range(n)])
        if degree(a) <= 0:
            continue
        g = poly_gcd(F, f, a)
        if 0 < degree(g) < n:
            break
        b = poly_sub(F, poly_powmod(F, a, e, f), (1,))
        g = poly_gcd(F, f, b)
        if 0 < degree(g) < n:
            break
    return _equal_degree(F, g, d, rng) + _equal_degree(F, poly_divmod(F, f, g)[0], d, rng)


def factor_poly(F: GF, f: Sequence[int], seed: int = 0) -> list[tuple[Poly, int]]:
    """Factor ``f`` into monic irreducibles with multiplicities.

    The leading coefficient is dropped; output is sorted by :func:`poly_key`.
    Splitting uses a seeded generator, so results are reproducible.
    """
    f = trim(f)
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    f = poly_monic(F, f)
    rng = random.Random(seed)
    mult: dict[Poly, int] = {}
    for part, e in _square_free(F, f):
        for chunk, d in _distinct_degree(F, part):
            for irr in _equal_degree(F, chunk, d, rng):
                irr = poly_monic(F, irr)
                mult[irr] = mult.get(irr, 0) + e
    return sorted(mult.items(), key=lambda t: poly_key(t[0]))


def minimal_polynomial(F: GF, y: Poly, mod: Poly) -> Poly:
    """Minimal polynomial over F of the class of ``y`` in F[x]/(mod)."""
    n = degree(mod)
    y = poly_mod(F, y, mod)

    def vec(h):
        return list(h) + [0] * (n - len(h))

    basis: list[tuple[int, list[int], list[int]]] = []
    power: Poly = (1,)
    for k in range(n + 1):
        v = vec(power)
        combo = [0] * (k + 1)
        combo[k] = 1
        for piv, bv, bc in basis:
            c = v[piv]
            if c:
                nc = F.neg(c)
                v = [F.add(a, F.mul(nc, b)) for a, b in zip(v, bv)]
                for i, b in enumerate(bc):
                    combo[i] = F.add(combo[i], F.mul(nc, b))
        piv = next((i for i, a in enumerate(v) if a), None)
        if piv is None:
            return trim(combo)
        s = F.inv(v[piv])
        basis.append((piv, [F.mul(a, s) for a in v], [F.mul(a, s) for a in combo]))
        power = poly_mod(F, poly_mul(F, power, y), mod)
    raise AssertionError("no linear dependency found")  # unreachable: n+1 vectors in dim n


# -- Frobenius orbits ----------------------------------------------------------

@dataclass(frozen=True)
class FrobOrbit:
    """A q-Frobenius orbit in the multiplicative group of the algebraic closure.

    Encoded by its minimal polynomial over F_q (monic, irreducible, not x).
    """

    field: GF = dc_field(repr=False)
    poly: Poly

    def __post_init__(self):
        if not self.poly or self.poly[-1] != 1:
            raise ValueError(f"orbit polynomial must be monic, got {self.poly}")
        if self.poly[0] == 0:
            raise ValueError("x is not an orbit of nonzero elements")

    @classmethod
    def checked(cls, field: GF, poly: Sequence[int]) -> "FrobOrbit":
        poly = trim(poly)
        if not is_irreducible(field, poly):
            raise ValueError(f"{poly} is reducible over {field}")
        return cls(field, poly)

    @classmethod
    def of_element(cls, field: GF, c: int) -> "FrobOrbit":
        if c == 0:
            raise ValueError("zero has no Frobenius orbit in the multiplicative group")
        return cls(field, (field.neg(c), 1))

    @property
    def size(self) -> int:
        return len(self.poly) - 1

    @property
    def sort_key(self) -> tuple:
        return poly_key(self.poly)

    def __lt__(self, other: "FrobOrbit") -> bool:
        return self.sort_key < other.sort_key


def orbit_inverse(P: FrobOrbit) -> FrobOrbit:
    F = P.field
    return FrobOrbit(F, poly_monic(F, tuple(reversed(P.poly))))


def orbit_frobenius_power(P: FrobOrbit, q1: int) -> FrobOrbit:
    """Orbit of lambda^q1 for lambda a root of P (q must be a power of q1)."""
    F = P.field
    if not F.is_power_of(q1):
        raise ValueError(f"q = {F.q} is not a power of {q1}")
    y = poly_powmod(F, (0, 1), q1, P.poly)
    return FrobOrbit(F, minimal_polynomial(F, y, P.poly))


def is_self_inverse(P: FrobOrbit) -> bool:
    return orbit_inverse(P) == P
