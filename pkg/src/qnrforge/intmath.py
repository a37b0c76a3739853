"""Small-integer helpers: primality, factoring, totients, orders.

Everything here works on plain Python ints and is sized for conductors and
moduli that appear at desk scale (trial division is fine below ~10^12).
"""

from functools import lru_cache
from math import gcd, isqrt

# Deterministic Miller-Rabin witnesses, valid for n < 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    """All primes p <= n (sieve of Eratosthenes)."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


def odd_primes_below(n: int) -> list[int]:
    return [p for p in primes_up_to(n - 1) if p > 2]


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as ((prime, exponent), ...)."""
    out = []
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            k = 0
            while m % d == 0:
                m //= d
                k += 1
            out.append((d, k))
        d += 1 if d == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def euler_phi(n: int) -> int:
    result = n
    for prime, _ in factorize(n):
        result -= result // prime
    return result


def divisors(n: int) -> list[int]:
    divs = [1]
    for prime, k in factorize(n):
        divs = [d * prime**i for d in divs for i in range(k + 1)]
    return sorted(divs)


def multiplicative_order(a: int, m: int) -> int:
    """Order of a in (Z/m)^*; requires gcd(a, m) = 1."""
    if m == 1:
        return 1
    a %= m
    if gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit modulo {m}")
    order = euler_phi(m)
    for prime, _ in factorize(order):
        while order % prime == 0 and pow(a, order // prime, m) == 1:
            order //= prime
    return order


def two_adic_split(n: int) -> tuple[int, int]:
    """Write n = 2^k * odd and return (k, odd)."""
    k = 0
    while n % 2 == 0:
        n //= 2
        k += 1
    return k, n


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
