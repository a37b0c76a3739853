"""Quadratic symbols and elementary nonresidue constructions modulo a prime."""

from .errors import DegeneratePair, InvalidModulus, NoShortcut
from .ffcore import check_odd_prime, mod_inverse


def euler_criterion(a: int, p: int) -> int:
    """Legendre symbol (a/p) from a^((p-1)/2); returns -1, 0 or 1."""
    if p < 3 or p % 2 == 0:
        raise InvalidModulus(f"expected an odd prime, got {p}")
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    if t == 1:
        return 1
    if t == p - 1:
        return -1
    raise InvalidModulus(f"{p} is not prime (Euler power of {a} is {t})")


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 3 by reciprocity, without factoring n."""
    if n < 3 or n % 2 == 0:
        raise InvalidModulus(f"Jacobi symbol needs odd n >= 3, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_qnr(a: int, p: int) -> bool:
    return euler_criterion(a, p) == -1


def least_qnr(p: int) -> int:
    """Smallest z >= 2 with (z/p) = -1."""
    check_odd_prime(p)
    z = 2
    while euler_criterion(z, p) != -1:
        z += 1
    # Gauss: the least nonresidue is below sqrt(p) + 1
    assert (z - 1) ** 2 < p, f"least nonresidue {z} of {p} violates the sqrt bound"
    return z


def shortcut_qnr(p: int) -> int:
    """Nonresidue read off from p mod 8 via the supplementary laws.

    p = 3, 5 (mod 8) gives 2, p = 7 (mod 8) gives -1 = p - 1.
    """
    check_odd_prime(p)
    if p % 8 in (3, 5):
        z = 2
    elif p % 8 == 7:
        z = p - 1
    else:
        raise NoShortcut(f"{p} = 1 (mod 8) has no residue-class shortcut")
    if euler_criterion(z, p) != -1:
        raise ArithmeticError(f"shortcut value {z} failed Euler check mod {p}")
    return z


def qnr_orbit(z: int, p: int, count: int) -> list[int]:
    """s*z for s = 1^2, 2^2, ..., count^2 (all nonresidues)."""
    if euler_criterion(z, p) != -1:
        raise ValueError(f"{z} is not a nonresidue mod {p}")
    return [i * i * z % p for i in range(1, count + 1)]


def qnr_spaced_pair(z: int, s: int, v: int, p: int) -> tuple[int, int]:
    """Two nonresidues spaced v apart, built from the nonresidue s*z.

    z_s = (sz + v)^2 / (4sz) and z_s - v = (sz - v)^2 / (4sz); both are a
    square over the nonresidue 4sz.
    """
    if euler_criterion(z, p) != -1:
        raise ValueError(f"{z} is not a nonresidue mod {p}")
    if euler_criterion(s, p) != 1:
        raise ValueError(f"{s} is not a nonzero square mod {p}")
    if v % p == 0:
        raise ValueError("spacing v must be nonzero mod p")
    sz = s * z % p
    if (sz - v) % p == 0 or (sz + v) % p == 0:
        raise DegeneratePair(f"sz = {sz} = +-{v} (mod {p})")
    zs = (sz + v) ** 2 * mod_inverse(4 * sz, p) % p
    return zs, (zs - v) % p


def char_sum_prefix(p: int, n: int) -> int:
    """sum_{x=1..n} (x/p)."""
    if not 1 <= n < p:
        raise ValueError(f"need 1 <= N < p, got N={n}, p={p}")
    return sum(euler_criterion(x, p) for x in range(1, n + 1))

