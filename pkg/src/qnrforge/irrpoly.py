"""Irreducible polynomials of degree 2^e from a nonresidue, and their images
under linear fractional substitutions."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import ConstructionFailed, DegreeDrop, SingularTransform
from .ffcore import (
    as_field,
    poly_add,
    poly_monic,
    poly_mul,
    poly_normalize,
    poly_scale,
    rabin_irreducible,
)


def _irreducible_over(f, fd) -> bool:
    # f has F_p coefficients; it stays irreducible over F_q iff deg f is coprime to [F_q : F_p]
    return rabin_irreducible(f, fd.p) and gcd(len(f) - 1, fd.degree) == 1


def _eval(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def _substitute_square(g, c, p):
    """g(x^2 - c)."""
    inner = [-c % p, 0, 1]
    out = []
    for coeff in reversed(g):
        out = poly_add(poly_mul(out, inner, p), [coeff], p)
    return out


@dataclass(frozen=True)
class TowerResult:
    poly: list
    strategy: str
    shifts: tuple = ()


def binomial_tower(q, e: int, z: int) -> TowerResult:
    """Monic irreducible of degree 2^e over F_q built from the nonresidue z.

    The binomial x^(2^e) - z is tried first.  Otherwise the degree is doubled
    one step at a time, g <- g(x^2 - c), with c the least shift making g(-c) a
    nonresidue; that keeps every step irreducible.
    """
    fd = as_field(q)
    p = fd.p
    if e < 1:
        raise ValueError(f"log2 degree must be >= 1, got {e}")
    if fd.euler(z) != -1:
        raise ValueError(f"{z} is not a nonresidue in F_{fd.q}")
    binomial = [-z % p] + [0] * ((1 << e) - 1) + [1]
    if _irreducible_over(binomial, fd):
        return TowerResult(binomial, "binomial")
    g = [-z % p, 0, 1]
    shifts = []
    for _ in range(e - 1):
        # deg g is even, so g(-c) is the norm of alpha + c
        c = next((c for c in range(p) if fd.euler(_eval(g, -c % p, p)) == -1), None)
        if c is None:
            raise ConstructionFailed(f"no shift c with g(-c) a nonresidue over F_{fd.q}")
        shifts.append(c)
        g = _substitute_square(g, c, p)
    if not _irreducible_over(g, fd):
        raise ConstructionFailed(f"tower polynomial {g} failed the irreducibility check")
    return TowerResult(g, "tower", tuple(shifts))


@dataclass(frozen=True)
class MobiusMap:
    """x -> (a x + b) / (c x + d)."""

    a: int
    b: int
    c: int
    d: int

    def det(self, p: int) -> int:
        return (self.a * self.d - self.b * self.c) % p

    def compose(self, other: MobiusMap) -> MobiusMap:
        """Matrix product self * other; applying self then other equals applying this."""
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )


IDENTITY = MobiusMap(1, 0, 0, 1)


def mobius_generate(f, m: MobiusMap, p: int) -> list[int]:
    """Monic form of (c x + d)^n f((a x + b) / (c x + d))."""
    f = poly_normalize(f, p)
    n = len(f) - 1
    if m.det(p) == 0:
        raise SingularTransform(f"a d - b c = 0 mod {p} for {m}")
    num = [m.b % p, m.a % p]
    den = [m.d % p, m.c % p]
    num_pows = [[1]]
    den_pows = [[1]]
    for _ in range(n):
        num_pows.append(poly_mul(num_pows[-1], num, p))
        den_pows.append(poly_mul(den_pows[-1], den, p))
    out = []
    for i, coeff in enumerate(f):
        term = poly_mul(num_pows[i], den_pows[n - i], p)
        out = poly_add(out, poly_scale(term, coeff, p), p)
    if len(out) - 1 != n:
        raise DegreeDrop(f"leading coefficient vanished: a/c is a root of {f}")
    return poly_monic(out, p)
