"""Square roots modulo an odd prime from a known nonresidue."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidModulus, NotAResidue, ZeroDenominator
from .ffcore import check_odd_prime, mod_inverse, powmod
from .intmath import two_adic_split
from .symbols import euler_criterion


@dataclass(frozen=True)
class SqrtResult:
    root: int
    other_root: int
    method: str = "tonelli"
    notes: tuple = field(default=())


def _canonical(x: int, p: int, method: str, notes=()) -> SqrtResult:
    x %= p
    root = min(x, p - x) if x else 0
    other = p - root if root else 0
    return SqrtResult(root, other, method, tuple(notes))


def _check_inputs(a: int, p: int, z: int) -> int:
    check_odd_prime(p)
    a %= p
    if euler_criterion(a, p) == -1:
        raise NotAResidue(f"{a} is a nonresidue mod {p}")
    if euler_criterion(z, p) != -1:
        raise InvalidModulus(f"supplied z = {z} is not a nonresidue mod {p}")
    return a


def tonelli_shanks(a: int, p: int, z: int) -> SqrtResult:
    """Square root by descent through the 2-Sylow subgroup, generated by z^n."""
    a = _check_inputs(a, p, z)
    if a == 0:
        return _canonical(0, p, "tonelli")
    k, n = two_adic_split(p - 1)
    c = pow(z, n, p)
    x = pow(a, (n + 1) // 2, p)
    t = pow(a, n, p)
    m = k
    while t != 1:
        # smallest i with t^(2^i) = 1
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        x = x * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return _canonical(x, p, "tonelli")


def cipolla_sum(a: int, p: int, z: int) -> SqrtResult:
    """Square root as a closed sum over the odd powers of z^n.

    With p = 2^k n + 1, n odd:
        sqrt(a) = +-2^(2-k) a^((n+1)/2) sum_{i < 2^(k-1)} a^(n i) / (z^((2i+1) n) - 1)
    The result is squared before returning; on mismatch the Tonelli root is
    returned with a note.
    """
    a = _check_inputs(a, p, z)
    if a == 0:
        return _canonical(0, p, "cipolla")
    k, n = two_adic_split(p - 1)
    zn = pow(z, n, p)
    zn2 = zn * zn % p
    an = pow(a, n, p)
    total = 0
    w = zn  # z^((2i+1) n)
    ai = 1  # a^(n i)
    for i in range(1 << (k - 1)):
        if w == 1:
            raise ZeroDenominator(f"z^({2 * i + 1}*{n}) = 1 mod {p}; z is not a nonresidue")
        total = (total + ai * mod_inverse(w - 1, p)) % p
        w = w * zn2 % p
        ai = ai * an % p
    x = powmod(2, 2 - k, p) * pow(a, (n + 1) // 2, p) * total % p
    if x * x % p == a:
        return _canonical(x, p, "cipolla")
    fallback = tonelli_shanks(a, p, z)
    note = f"sum gave {x}, whose square is {x * x % p} != {a}; used tonelli"
    return _canonical(fallback.root, p, "tonelli", (note,))


def sqrt_mod(a: int, p: int, z: int | None = None, method: str = "tonelli") -> SqrtResult:
    if z is None:
        from .engine import qnr_auto

        z = qnr_auto(p).value
    if method == "tonelli":
        return tonelli_shanks(a, p, z)
    if method == "cipolla":
        return cipolla_sum(a, p, z)
    raise ValueError(f"unknown square-root method {method!r}")
