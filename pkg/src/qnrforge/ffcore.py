"""Exact arithmetic in F_p, F_p[y] and quotient rings F_p[y]/f(y).

Polynomials over F_p are plain lists of residues, lowest degree first, with
trailing zeros trimmed (``[]`` is the zero polynomial).  Quotient rings may be
non-fields; nothing here assumes the modulus is irreducible unless stated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd

from .errors import InvalidModulus, NotInvertible
from .intmath import factorize, is_prime

# Below this length schoolbook multiplication beats Kronecker packing.
_KRONECKER_CUTOFF = 24


def powmod(a: int, e: int, m: int) -> int:
    """a^e mod m, canonical in [0, m)."""
    if m < 2:
        raise InvalidModulus(f"modulus must be >= 2, got {m}")
    if e < 0:
        return pow(mod_inverse(a, m), -e, m)
    return pow(a, e, m)


def mod_inverse(a: int, m: int) -> int:
    """b with a*b = 1 (mod m); extended Euclid."""
    a %= m
    if gcd(a, m) != 1:
        raise NotInvertible(f"{a} has no inverse modulo {m}")
    r0, r1, s0, s1 = m, a, 0, 1
    while r1:
        quo = r0 // r1
        r0, r1 = r1, r0 - quo * r1
        s0, s1 = s1, s0 - quo * s1
    return s0 % m


def check_odd_prime(p: int) -> None:
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise InvalidModulus(f"expected an odd prime, got {p}")


# ---------------------------------------------------------------------------
# Dense polynomials over F_p


def poly_trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_normalize(f, p):
    return poly_trim([c % p for c in f])


def poly_add(f, g, p):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = (out[i] + c) % p
    return poly_trim(out)


def poly_sub(f, g, p):
    return poly_add(f, [-c % p for c in g], p)


def poly_scale(f, c, p):
    return poly_trim([a * c % p for a in f])


def _pack(coeffs, width):
    return int.from_bytes(b"".join(c.to_bytes(width, "little") for c in coeffs), "little")


def _kronecker_nonneg(f, g):
    bound = min(len(f), len(g)) * max(f) * max(g)
    width = (bound.bit_length() + 8) // 8
    prod = _pack(f, width) * _pack(g, width)
    raw = prod.to_bytes(width * (len(f) + len(g) - 1), "little")
    return [int.from_bytes(raw[i : i + width], "little") for i in range(0, len(raw), width)]


def int_poly_mul(f, g):
    """Exact product of integer coefficient lists (signs allowed)."""
    if not f or not g:
        return []
    if min(len(f), len(g)) < _KRONECKER_CUTOFF:
        out = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if a:
                for j, b in enumerate(g):
                    out[i + j] += a * b
        return out
    fp = [max(c, 0) for c in f]
    fn = [max(-c, 0) for c in f]
    gp = [max(c, 0) for c in g]
    gn = [max(-c, 0) for c in g]
    out = [0] * (len(f) + len(g) - 1)
    for x, y, sign in ((fp, gp, 1), (fp, gn, -1), (fn, gp, -1), (fn, gn, 1)):
        if any(x) and any(y):
            for i, c in enumerate(_kronecker_nonneg(x, y)):
                out[i] += sign * c
    return out


def poly_mul(f, g, p):
    return poly_trim([c % p for c in int_poly_mul(f, g)])


def poly_divmod(f, g, p):
    """Quotient and remainder of f by nonzero g over F_p."""
    g = poly_trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv = mod_inverse(g[-1], p)
    rem = [c % p for c in f]
    dg = len(g) - 1
    if len(rem) - 1 < dg:
        return [], poly_trim(rem)
    quo = [0] * (len(rem) - dg)
    for i in range(len(rem) - 1, dg - 1, -1):
        c = rem[i] * inv % p
        if c:
            quo[i - dg] = c
            for j in range(dg + 1):
                rem[i - dg + j] = (rem[i - dg + j] - c * g[j]) % p
    return poly_trim(quo), poly_trim(rem[:dg])


def poly_mod(f, g, p):
    return poly_divmod(f, g, p)[1]


def poly_monic(f, p):
    f = poly_trim(f)
    if not f:
        return f
    return poly_scale(f, mod_inverse(f[-1], p), p)


def poly_gcd(f, g, p):
    f, g = poly_normalize(f, p), poly_normalize(g, p)
    while g:
        f, g = g, poly_mod(f, g, p)
    return poly_monic(f, p)


def _small_mulmod(a, b, tail, n, p):
    """a*b mod (x^n - tail) for short operands; inputs and output have length n."""
    out = [0] * (2 * n - 1)
    for i, c in enumerate(a):
        if c:
            for j, d in enumerate(b):
                out[i + j] += c * d
    for i in range(2 * n - 2, n - 1, -1):
        c = out[i] % p
        if c:
            base = i - n
            for j, t in enumerate(tail):
                out[base + j] += c * t
    return [c % p for c in out[:n]]


def poly_powmod(base, e, mod, p):
    mod = poly_monic(poly_normalize(mod, p), p)
    n = len(mod) - 1
    base = poly_mod(base, mod, p)
    if n < 1:
        return []
    if n >= _KRONECKER_CUTOFF:
        result = [1]
        while e:
            if e & 1:
                result = poly_mod(poly_mul(result, base, p), mod, p)
            e >>= 1
            if e:
                base = poly_mod(poly_mul(base, base, p), mod, p)
        return poly_mod(result, mod, p)
    # x^n = sum tail_j x^j
    tail = [-c % p for c in mod[:-1]]
    result = [1 % p] + [0] * (n - 1)
    base = base + [0] * (n - len(base))
    while e:
        if e & 1:
            result = _small_mulmod(result, base, tail, n, p)
        e >>= 1
        if e:
            base = _small_mulmod(base, base, tail, n, p)
    return poly_trim(result)


def poly_eval(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def poly_derivative(f, p):
    return poly_trim([i * c % p for i, c in enumerate(f)][1:])


def rabin_irreducible(f, p: int) -> bool:
    """Rabin's test: is f irreducible over F_p?"""
    f = poly_monic(poly_normalize(f, p), p)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    for ell, _ in factorize(n):
        h = poly_powmod(x, p ** (n // ell), f, p)
        if poly_gcd(poly_sub(h, x, p), f, p) != [1]:
            return False
    if n <= 3:
        # no root means irreducible in degree 2 and 3
        return True
    return poly_powmod(x, p**n, f, p) == poly_mod(x, f, p)


def distinct_degree_factor(f, p: int) -> list[tuple[int, list[int]]]:
    """Distinct-degree factorization of a monic squarefree f over F_p.

    Returns (degree, product of all irreducible factors of that degree).
    """
    f = poly_monic(poly_normalize(f, p), p)
    out = []
    x = [0, 1]
    h = x
    i = 0
    while len(f) - 1 >= 2 * (i + 1):
        i += 1
        h = poly_powmod(h, p, f, p)
        g = poly_gcd(poly_sub(h, x, p), f, p)
        if g != [1]:
            out.append((i, g))
            f = poly_divmod(f, g, p)[0]
            h = poly_mod(h, f, p)
    if len(f) > 1:
        out.append((len(f) - 1, f))
    return out


def squarefree_decomposition(f, p: int) -> list[tuple[list[int], int]]:
    """(g, multiplicity) pairs with f = prod g^multiplicity over F_p."""
    f = poly_monic(poly_normalize(f, p), p)
    out = []
    mult = 1
    while len(f) > 1:
        df = poly_derivative(f, p)
        if not df:
            # f = g(x^p)
            f = [f[i] for i in range(0, len(f), p)]
            mult *= p
            continue
        c = poly_gcd(f, df, p)
        w = poly_divmod(f, c, p)[0]
        i = 1
        while len(w) > 1:
            y = poly_gcd(w, c, p)
            factor = poly_divmod(w, y, p)[0]
            if len(factor) > 1:
                out.append((factor, i * mult))
            w, c = y, poly_divmod(c, y, p)[0]
            i += 1
        if len(c) > 1:
            # remaining c is a p-th power
            f = [c[i] for i in range(0, len(c), p)]
            mult *= p
        else:
            break
    return out


# ---------------------------------------------------------------------------
# Quotient rings F_p[y]/f(y)


class QuotientRing:
    """The ring F_p[y]/modulus(y) with a chosen Frobenius size q = p^k.

    ``root_order`` may be given when y^r = 1 holds in the ring (cyclotomic
    quotients); Frobenius then acts by permuting exponents of y.  With it a
    ``cofactor`` C, modulus * C = y^r - 1, turns reduction into two products.
    """

    def __init__(
        self,
        p: int,
        modulus,
        q: int | None = None,
        root_order: int | None = None,
        cofactor=None,
    ):
        check_odd_prime(p)
        modulus = poly_normalize(modulus, p)
        if len(modulus) < 2 or modulus[-1] != 1:
            raise InvalidModulus("ring modulus must be monic of degree >= 1")
        self.p = p
        self.modulus = tuple(modulus)
        self.degree = len(modulus) - 1
        self.q = p if q is None else q
        self.root_order = root_order
        self._tail = [(j, c) for j, c in enumerate(modulus[:-1]) if c]
        self._cofactor = None
        if cofactor is not None:
            if root_order is None:
                raise ValueError("cofactor reduction needs root_order")
            self._cofactor = poly_normalize(cofactor, p)

    def __eq__(self, other):
        return (
            isinstance(other, QuotientRing)
            and (self.p, self.modulus, self.q) == (other.p, other.modulus, other.q)
        )

    def __hash__(self):
        return hash((self.p, self.modulus, self.q))

    def __repr__(self):
        return f"QuotientRing(p={self.p}, modulus={list(self.modulus)}, q={self.q})"

    def reduce(self, coeffs) -> tuple:
        p, n = self.p, self.degree
        v = list(coeffs)
        r = self.root_order
        if r is not None and len(v) > r:
            folded = v[:r]
            for i in range(r, len(v)):
                folded[i % r] += v[i]
            v = folded
        if self._cofactor is not None and len(v) > n and (len(v) - n) * len(self._tail) > 4096:
            return self._reduce_by_cofactor(v)
        tail = self._tail
        for i in range(len(v) - 1, n - 1, -1):
            c = v[i] % p
            if c:
                base = i - n
                for j, m in tail:
                    v[base + j] -= c * m
        v = [c % p for c in v[:n]]
        while v and v[-1] == 0:
            v.pop()
        return tuple(v)

    def _reduce_by_cofactor(self, v) -> tuple:
        # deg v < r: v * C = Q (y^r - 1) + R * C, so Q is the part of v * C above y^r
        p, n, r = self.p, self.degree, self.root_order
        v = [c % p for c in v]
        w = int_poly_mul(v, self._cofactor)
        quo = [c % p for c in w[r:]]
        if not any(quo):
            out = v[:n]
        else:
            qm = int_poly_mul(quo, list(self.modulus))
            out = [(a - b) % p for a, b in zip(v[:n], qm[:n] + [0] * (n - min(n, len(qm))))]
        while out and out[-1] == 0:
            out.pop()
        return tuple(out)

    def element(self, coeffs) -> RingElement:
        return RingElement(self, self.reduce(coeffs))

    def const(self, c: int) -> RingElement:
        return self.element([c])

    def gen(self) -> RingElement:
        return self.element([0, 1])

    def zero(self) -> RingElement:
        return RingElement(self, ())

    def one(self) -> RingElement:
        return self.const(1)


class RingElement:
    """Immutable residue class in a QuotientRing."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: QuotientRing, coeffs: tuple):
        self.ring = ring
        self.coeffs = coeffs

    def _lift(self, other):
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise ValueError("elements belong to different rings")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return RingElement(self.ring, tuple(poly_add(self.coeffs, other.coeffs, self.ring.p)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return RingElement(self.ring, tuple(-c % p for c in self.coeffs))

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return RingElement(self.ring, self.ring.reduce(int_poly_mul(self.coeffs, other.coeffs)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported in a general ring")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __repr__(self):
        return f"RingElement({list(self.coeffs)} mod {list(self.ring.modulus)}, p={self.ring.p})"

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError("element is not constant")
        return self.coeffs[0] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs


def _permuted_frobenius(x: RingElement, multiplier: int) -> RingElement:
    # coefficients lie in F_p, so x^(q^j) = sum c_a y^(a * q^j mod r)
    ring = x.ring
    r = ring.root_order
    v = [0] * r
    for a, c in enumerate(x.coeffs):
        if c:
            v[a * multiplier % r] += c
    return ring.element(v)


def frobenius_power(x: RingElement, j: int) -> RingElement:
    """x^(q^j) in x's ring, where q is the ring's Frobenius size."""
    ring = x.ring
    if j == 0 or x.is_constant():
        return x
    if ring.root_order is not None:
        return _permuted_frobenius(x, pow(ring.q, j, ring.root_order))
    for _ in range(j):
        x = x**ring.q
    return x


def frobenius_power_generic(x: RingElement, j: int) -> RingElement:
    """Square-and-multiply Frobenius that ignores any cyclotomic shortcut."""
    for _ in range(j):
        x = x**x.ring.q
    return x


def partial_trace(x: RingElement, step: int, terms: int) -> RingElement:
    """x + x^(q^step) + x^(q^(2 step)) + ... with ``terms`` summands."""
    if step < 1 or terms < 1:
        raise ValueError("step and terms must be positive")
    ring = x.ring
    if ring.root_order is not None:
        r = ring.root_order
        v = [0] * r
        stride = pow(ring.q, step, r)
        mult = 1
        support = [(a, c) for a, c in enumerate(x.coeffs) if c]
        for _ in range(terms):
            for a, c in support:
                v[a * mult % r] += c
            mult = mult * stride % r
        return ring.element(v)
    total = ring.zero()
    cur = x
    for i in range(terms):
        total = total + cur
        if i + 1 < terms:
            cur = frobenius_power(cur, step)
    return total


# ---------------------------------------------------------------------------
# Field descriptors


@dataclass(frozen=True)
class FieldDescriptor:
    """F_q with q = p^(2t+1), optionally presented by a user-supplied modulus."""

    p: int
    ext_modulus: tuple | None = None

    def __post_init__(self):
        check_odd_prime(self.p)
        if self.ext_modulus is not None:
            f = tuple(poly_trim(self.ext_modulus))
            if any(not 0 <= c < self.p for c in f):
                f = tuple(poly_normalize(f, self.p))
            object.__setattr__(self, "ext_modulus", f)
            n = len(f) - 1
            if n < 1 or f[-1] != 1:
                raise InvalidModulus("extension modulus must be monic of degree >= 1")
            if n % 2 == 0:
                raise InvalidModulus("extension degree must be odd")
            if not rabin_irreducible(list(f), self.p):
                raise InvalidModulus("extension modulus is reducible over F_p")
            if n == 1:
                object.__setattr__(self, "ext_modulus", None)

    @property
    def degree(self) -> int:
        return 1 if self.ext_modulus is None else len(self.ext_modulus) - 1

    @property
    def q(self) -> int:
        return self.p**self.degree

    @property
    def is_prime_field(self) -> bool:
        return self.ext_modulus is None

    @cached_property
    def ring(self) -> QuotientRing:
        """F_q itself as a quotient ring (F_p[x]/(x) for the prime field)."""
        modulus = list(self.ext_modulus) if self.ext_modulus else [0, 1]
        return QuotientRing(self.p, modulus)

    def euler(self, c: int) -> int:
        """Quadratic character in F_q of the prime-field element c."""
        if c % self.p == 0:
            return 0
        if self.is_prime_field:
            v = pow(c, (self.p - 1) // 2, self.p)
        else:
            v = (self.ring.const(c) ** ((self.q - 1) // 2)).constant_value()
        if v == 1:
            return 1
        if v == self.p - 1:
            return -1
        raise ArithmeticError(f"Euler power of {c} is {v}, expected +-1")

    def to_json(self):
        return {"p": self.p, "ext_modulus": list(self.ext_modulus) if self.ext_modulus else None}


def as_field(q) -> FieldDescriptor:
    if isinstance(q, FieldDescriptor):
        return q
    return FieldDescriptor(int(q))
