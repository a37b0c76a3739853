"""Cyclotomic integers, Gauss periods and period polynomials over Z.

Roots of unity are never evaluated numerically: a period is an element of
Z[x]/Phi_r(x), and the period polynomial is multiplied out exactly in that
ring.  Every coefficient of the product has to come out constant, which is
checked rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, gcd, isqrt

from .errors import (
    DeskScaleExceeded,
    InvalidConductor,
    NoSuchSubgroup,
    NonIntegerCoefficients,
    NonIntegerResult,
)
from .ffcore import distinct_degree_factor, int_poly_mul, poly_normalize, squarefree_decomposition
from .intmath import divisors, euler_phi, factorize, is_prime, lcm


@dataclass(frozen=True)
class IntegerPolynomial:
    """Exact integer polynomial, lowest degree first, no trailing zeros."""

    coeffs: tuple

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def reduce(self, p: int) -> list[int]:
        return poly_normalize(self.coeffs, p)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self):
        return ",".join(str(c) for c in self.coeffs)


def _mobius(n: int) -> int:
    fac = factorize(n)
    if any(k > 1 for _, k in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def _mobius_product(ups, downs) -> tuple:
    """prod (x^d - 1) over ``ups`` divided by prod (x^d - 1) over ``downs``."""
    poly = [1]
    for d in ups:
        shifted = [0] * d + poly
        for i, c in enumerate(poly):
            shifted[i] -= c
        poly = shifted
    for d in downs:
        # b = q (x^d - 1)  =>  q_i = q_{i-d} - b_i
        quo = [0] * (len(poly) - d)
        for i in range(len(quo)):
            quo[i] = -poly[i] + (quo[i - d] if i >= d else 0)
        poly = quo
    return tuple(poly)


@lru_cache(maxsize=None)
def _cyclotomic_coeffs(r: int) -> tuple:
    # Phi_r = prod_{d | r} (x^d - 1)^mu(r/d); multiply first so every division is exact
    ups = [d for d in divisors(r) if _mobius(r // d) == 1]
    downs = [d for d in divisors(r) if _mobius(r // d) == -1]
    return _mobius_product(ups, downs)


@lru_cache(maxsize=None)
def _cofactor_coeffs(r: int) -> tuple:
    # (x^r - 1) / Phi_r = prod_{d | r, d < r} (x^d - 1)^(-mu(r/d))
    divs = divisors(r)[:-1]
    ups = [d for d in divs if _mobius(r // d) == -1]
    downs = [d for d in divs if _mobius(r // d) == 1]
    return _mobius_product(ups, downs)


def cyclotomic_cofactor(r: int) -> IntegerPolynomial:
    """(x^r - 1) / Phi_r(x)."""
    if r < 1:
        raise InvalidConductor(f"conductor must be >= 1, got {r}")
    return IntegerPolynomial(_cofactor_coeffs(r))


def cyclotomic_polynomial(r: int) -> IntegerPolynomial:
    """Phi_r with exact integer coefficients."""
    if r < 1:
        raise InvalidConductor(f"conductor must be >= 1, got {r}")
    return IntegerPolynomial(_cyclotomic_coeffs(r))


@lru_cache(maxsize=None)
def _phi_tail(r: int):
    phi = _cyclotomic_coeffs(r)
    return len(phi) - 1, [(j, c) for j, c in enumerate(phi[:-1]) if c]


def _reduce_cyclo(coeffs, r: int) -> tuple:
    v = list(coeffs)
    if len(v) > r:
        folded = v[:r]
        for i in range(r, len(v)):
            folded[i % r] += v[i]
        v = folded
    n, tail = _phi_tail(r)
    for i in range(len(v) - 1, n - 1, -1):
        c = v[i]
        if c:
            base = i - n
            for j, m in tail:
                v[base + j] -= c * m
    v = v[:n]
    v += [0] * (n - len(v))
    return tuple(v)


class CyclotomicInteger:
    """Element of Z[x]/Phi_r(x), stored as phi(r) integer coefficients."""

    __slots__ = ("r", "coeffs")

    def __init__(self, r: int, coeffs):
        self.r = r
        self.coeffs = _reduce_cyclo(coeffs, r)

    @classmethod
    def zeta_power(cls, r: int, k: int) -> CyclotomicInteger:
        v = [0] * r
        v[k % r] = 1
        return cls(r, v)

    @classmethod
    def constant(cls, r: int, c: int) -> CyclotomicInteger:
        return cls(r, [c])

    def _other(self, other):
        if isinstance(other, int):
            return CyclotomicInteger.constant(self.r, other)
        if isinstance(other, CyclotomicInteger):
            if other.r != self.r:
                raise ValueError("conductors differ")
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return CyclotomicInteger(self.r, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInteger(self.r, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return CyclotomicInteger(self.r, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInteger(self.r, [a * other for a in self.coeffs])
        other = self._other(other)
        if other is NotImplemented:
            return other
        return CyclotomicInteger(self.r, int_poly_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = CyclotomicInteger.constant(self.r, other)
        if not isinstance(other, CyclotomicInteger):
            return NotImplemented
        return self.r == other.r and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.r, self.coeffs))

    def __repr__(self):
        return f"CyclotomicInteger(r={self.r}, {list(self.coeffs)})"

    def is_constant(self) -> bool:
        return not any(self.coeffs[1:])

    def constant_value(self) -> int:
        if not self.is_constant():
            raise NonIntegerCoefficients(f"{self!r} is not a rational integer")
        return self.coeffs[0]


# ---------------------------------------------------------------------------
# Subgroups of (Z/r)^*


def units(r: int) -> list[int]:
    return [a for a in range(1, r) if gcd(a, r) == 1] if r > 1 else [0]


def _cyclic_subgroup(g: int, r: int) -> frozenset:
    out = {1 % r}
    x = g % r
    while x not in out:
        out.add(x)
        x = x * g % r
    return frozenset(out)


def _join(a: frozenset, b: frozenset, r: int) -> frozenset:
    return frozenset(x * y % r for x in a for y in b)


@lru_cache(maxsize=None)
def subgroups_of_order(r: int, order: int) -> tuple[tuple[int, ...], ...]:
    """All subgroups of (Z/r)^* with the given order, sorted lexicographically."""
    phi = euler_phi(r)
    if order < 1 or phi % order:
        return ()
    cyclic = {_cyclic_subgroup(g, r) for g in units(r)}
    cyclic = [c for c in cyclic if order % len(c) == 0]
    found = set(cyclic)
    frontier = list(cyclic)
    while frontier:
        nxt = []
        for s in frontier:
            for c in cyclic:
                if c <= s:
                    continue
                size = len(s) * len(c) // len(s & c)
                if order % size:
                    continue
                j = _join(s, c, r)
                if j not in found:
                    found.add(j)
                    nxt.append(j)
        frontier = nxt
    return tuple(sorted(tuple(sorted(s)) for s in found if len(s) == order))


@dataclass(frozen=True)
class PeriodSpec:
    """Conductor r, subgroup K of (Z/r)^* of index d, and its d cosets."""

    r: int
    d: int
    e: int
    subgroup: tuple
    cosets: tuple


def period_spec(r: int, d: int, subgroup=None) -> PeriodSpec:
    """Pick K of order phi(r)/d and list its cosets (coset of 1 first)."""
    if r < 3:
        raise InvalidConductor(f"conductor must be >= 3, got {r}")
    phi = euler_phi(r)
    if d < 1 or phi % d:
        raise NoSuchSubgroup(f"{d} does not divide phi({r}) = {phi}")
    e = phi // d
    if subgroup is None:
        candidates = subgroups_of_order(r, e)
        if not candidates:
            raise NoSuchSubgroup(f"(Z/{r})^* has no subgroup of index {d}")
        k = candidates[0]
    else:
        k = tuple(sorted(x % r for x in subgroup))
        ks = set(k)
        if len(ks) != e or any(gcd(x, r) != 1 for x in ks) or any(
            x * y % r not in ks for x in ks for y in ks
        ):
            raise NoSuchSubgroup(f"{list(subgroup)} is not a subgroup of order {e} mod {r}")
    seen = set()
    cosets = []
    for a in units(r):
        if a in seen:
            continue
        coset = tuple(sorted(a * x % r for x in k))
        seen.update(coset)
        cosets.append(coset)
    return PeriodSpec(r=r, d=d, e=e, subgroup=k, cosets=tuple(cosets))


def gauss_periods(spec: PeriodSpec) -> list[CyclotomicInteger]:
    """eta_j = sum of zeta^x over the j-th coset."""
    out = []
    for coset in spec.cosets:
        v = [0] * spec.r
        for x in coset:
            v[x] += 1
        out.append(CyclotomicInteger(spec.r, v))
    return out


def coperiod_from_period(eta: CyclotomicInteger, n: int) -> CyclotomicInteger:
    return eta * n + 1


# ---------------------------------------------------------------------------
# Product tree


def _cpoly_mul(f, g):
    out = [None] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            t = a * b
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    return out


def product_tree_poly(factors):
    """Multiply polynomials with CyclotomicInteger coefficients.

    Equal-degree partial products are paired level by level; the odd
    leftovers from each level are folded in at the end.
    """
    if not factors:
        raise ValueError("need at least one factor")
    level = [list(f) for f in factors]
    stragglers = []
    while len(level) > 1:
        if len(level) % 2:
            stragglers.append(level.pop())
        level = [_cpoly_mul(level[i], level[i + 1]) for i in range(0, len(level), 2)]
    result = level[0]
    for s in sorted(stragglers, key=len):
        result = _cpoly_mul(result, s)
    return result


def linear_factors(roots):
    return [[-eta, CyclotomicInteger.constant(eta.r, 1)] for eta in roots]


def _demote(cpoly) -> IntegerPolynomial:
    coeffs = []
    for c in cpoly:
        if not c.is_constant():
            raise NonIntegerCoefficients(f"coefficient {c!r} is not constant")
        coeffs.append(c.constant_value())
    return IntegerPolynomial(tuple(coeffs))


@lru_cache(maxsize=1024)
def _period_polynomial_cached(r: int, d: int, subgroup: tuple) -> IntegerPolynomial:
    spec = period_spec(r, d, subgroup)
    return _demote(product_tree_poly(linear_factors(gauss_periods(spec))))


def period_polynomial(r: int, d: int, subgroup=None) -> IntegerPolynomial:
    """psi_r of degree d: the product of (x - eta_j) over all d periods."""
    k = period_spec(r, d, subgroup).subgroup
    return _period_polynomial_cached(r, d, k)


def coperiod_polynomial(r: int, d: int, subgroup=None) -> IntegerPolynomial:
    """theta_r of degree d, multiplied out from the coperiods 1 + d*eta_j."""
    spec = period_spec(r, d, subgroup)
    roots = [coperiod_from_period(eta, d) for eta in gauss_periods(spec)]
    return _demote(product_tree_poly(linear_factors(roots)))


# ---------------------------------------------------------------------------
# Closed forms and the psi <-> theta substitution


def closed_form_psi2(r: int) -> IntegerPolynomial:
    if r < 3 or r % 2 == 0 or not is_prime(r):
        raise InvalidConductor(f"expected an odd prime conductor, got {r}")
    sign = -1 if (r - 1) // 2 % 2 else 1
    return IntegerPolynomial(((1 - sign * r) // 4, 1, 1))


@dataclass(frozen=True)
class QuadraticPartition:
    r: int
    a: int
    b: int


def quadratic_partition(r: int) -> QuadraticPartition:
    """r = a^2 + b^2 with a = 1 (mod 4) and b > 0."""
    if r % 4 != 1 or not is_prime(r):
        raise InvalidConductor(f"expected a prime = 1 mod 4, got {r}")
    for b in range(1, isqrt(r) + 1):
        a2 = r - b * b
        a = isqrt(a2)
        if a * a == a2 and a % 2 == 1:
            return QuadraticPartition(r, a if a % 4 == 1 else -a, b)
    raise InvalidConductor(f"no sum-of-two-squares split found for {r}")


def _int_poly_add(f, g):
    out = [0] * max(len(f), len(g))
    for i, c in enumerate(f):
        out[i] += c
    for i, c in enumerate(g):
        out[i] += c
    return out


def closed_form_theta4(r: int, part: QuadraticPartition | None = None) -> IntegerPolynomial:
    """Quartic coperiod polynomial from the partition r = a^2 + b^2.

    (x^2 - r)^2 - 4r(x - a)^2 when (r - 1)/4 is even,
    (x^2 + 3r)^2 - 4r(x - a)^2 when it is odd.
    """
    if part is None:
        part = quadratic_partition(r)
    if part.r != r or part.a * part.a + part.b * part.b != r or part.a % 4 != 1:
        raise InvalidConductor(f"partition {part} does not fit r = {r}")
    a = part.a
    shift = -r if (r - 1) // 4 % 2 == 0 else 3 * r
    square = int_poly_mul([shift, 0, 1], [shift, 0, 1])
    lin = [-4 * r * c for c in int_poly_mul([-a, 1], [-a, 1])]
    return IntegerPolynomial(tuple(_int_poly_add(square, lin)))


def _compose_linear(coeffs, a: int, b: int):
    """sum c_i (a x + b)^i."""
    n = len(coeffs) - 1
    out = [0] * (n + 1)
    for i, c in enumerate(coeffs):
        if not c:
            continue
        for j in range(i + 1):
            out[j] += c * comb(i, j) * a**j * b ** (i - j)
    return out


def link_psi_theta(poly: IntegerPolynomial, n: int, direction: str) -> IntegerPolynomial:
    """Move between period and coperiod polynomials of degree n.

    psi->theta: n^n psi((x - 1)/n);  theta->psi: n^-n theta(n x + 1).
    """
    coeffs = list(poly.coeffs)
    if len(coeffs) - 1 != n or coeffs[-1] != 1:
        raise ValueError(f"expected a monic polynomial of degree {n}")
    if direction == "psi->theta":
        # n^n * sum c_i ((x-1)/n)^i = sum c_i n^(n-i) (x-1)^i
        scaled = [c * n ** (n - i) for i, c in enumerate(coeffs)]
        return IntegerPolynomial(tuple(_compose_linear(scaled, 1, -1)))
    if direction == "theta->psi":
        raw = _compose_linear(coeffs, n, 1)
        denom = n**n
        if any(c % denom for c in raw):
            raise NonIntegerResult("theta(n x + 1) is not divisible by n^n")
        return IntegerPolynomial(tuple(c // denom for c in raw))
    raise ValueError(f"unknown direction {direction!r}")


# ---------------------------------------------------------------------------
# Factorization pattern over F_q


@dataclass(frozen=True)
class FactorDegreeCheck:
    degrees: tuple
    lcm: int
    predicted: int
    passed: bool


def predicted_factor_degree(q: int, spec: PeriodSpec) -> int:
    """Least d >= 1 with q^d in K."""
    k = set(spec.subgroup)
    d, x = 1, q % spec.r
    while x not in k:
        x = x * q % spec.r
        d += 1
    return d


def factor_degrees_mod(poly: IntegerPolynomial, q: int) -> list[int]:
    """Degrees of the irreducible factors of poly over F_q, with multiplicity."""
    degrees = []
    for factor, mult in squarefree_decomposition(poly.reduce(q), q):
        for deg, prod in distinct_degree_factor(factor, q):
            degrees += [deg] * (((len(prod) - 1) // deg) * mult)
    return sorted(degrees)


def factor_degree_check(r: int, q: int, spec: PeriodSpec) -> FactorDegreeCheck:
    """Compare the factor degrees of psi_r over F_q with the subgroup prediction."""
    if gcd(r, q) != 1 or any(k > 1 for _, k in factorize(r)):
        raise InvalidConductor(f"need squarefree r coprime to q, got r={r}, q={q}")
    if spec.d > 8 or q >= 100:
        raise DeskScaleExceeded(f"deg {spec.d} / q {q} beyond desk scale (deg <= 8, q < 100)")
    psi = period_polynomial(r, spec.d, spec.subgroup)
    degrees = tuple(factor_degrees_mod(psi, q))
    total = lcm(*degrees)
    predicted = predicted_factor_degree(q, spec)
    return FactorDegreeCheck(degrees, total, predicted, total == predicted)
