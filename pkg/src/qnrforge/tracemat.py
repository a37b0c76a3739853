"""Power-basis trace matrices and the square class of their determinant."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import ReduciblePolynomial, SingularTraceMatrix
from .ffcore import QuotientRing, mod_inverse, partial_trace, poly_normalize, rabin_irreducible
from .symbols import euler_criterion


@dataclass(frozen=True)
class TraceMatrix:
    """T[i][j] = Tr(x^(i+j)) for the power basis of F_p[x]/f."""

    n: int
    entries: tuple
    f: tuple
    p: int

    def __post_init__(self):
        n = self.n
        for i in range(n):
            for j in range(n):
                k = i + j
                ref = self.entries[0][k] if k < n else self.entries[k - n + 1][n - 1]
                if self.entries[i][j] != ref:
                    raise ValueError("trace matrix must be Hankel")


def newton_power_sums(f, p: int, count: int) -> list[int]:
    """Power sums s_0..s_{count-1} of the roots of monic f, mod p."""
    f = poly_normalize(f, p)
    n = len(f) - 1
    # f = x^n + c[n-1] x^(n-1) + ... + c[0]
    c = f
    sums = [n % p]
    for k in range(1, count):
        acc = 0
        for i in range(1, min(k, n + 1)):
            acc += c[n - i] * sums[k - i]
        if k <= n:
            acc += k * c[n - k]
        sums.append(-acc % p)
    return sums


def frobenius_traces(f, p: int, count: int, q: int | None = None) -> list[int]:
    """Tr(x^k) for k < count, summing Frobenius conjugates in F_p[x]/f."""
    ring = QuotientRing(p, f, q=q)
    n = ring.degree
    x = ring.gen()
    out = []
    power = ring.one()
    for _ in range(count):
        t = partial_trace(power, 1, n)
        if not t.is_constant():
            raise ReduciblePolynomial("trace left the base field; modulus is not irreducible")
        out.append(t.constant_value())
        power = power * x
    return out


def power_basis_trace_matrix(f, p: int, *, ext_degree: int = 1, route: str = "newton") -> TraceMatrix:
    """Trace matrix of F_q[x]/f over F_q, q = p^ext_degree, f with F_p coefficients."""
    f = poly_normalize(f, p)
    n = len(f) - 1
    if f[-1] != 1:
        f = [c * mod_inverse(f[-1], p) % p for c in f]
    if not rabin_irreducible(f, p) or gcd(n, ext_degree) != 1:
        raise ReduciblePolynomial(f"{f} is not irreducible over F_{p}^{ext_degree}")
    if route == "newton":
        sums = newton_power_sums(f, p, 2 * n - 1)
    elif route == "frobenius":
        sums = frobenius_traces(f, p, 2 * n - 1, q=p**ext_degree)
    else:
        raise ValueError(f"unknown trace route {route!r}")
    entries = tuple(tuple(sums[i + j] for j in range(n)) for i in range(n))
    return TraceMatrix(n=n, entries=entries, f=tuple(f), p=p)


def det_mod_p(matrix, p: int | None = None) -> int:
    """Determinant mod p by Gaussian elimination."""
    if isinstance(matrix, TraceMatrix):
        p = matrix.p
        rows = [list(r) for r in matrix.entries]
    else:
        rows = [[c % p for c in r] for r in matrix]
    n = len(rows)
    det = 1
    for col in range(n):
        pivot = next((i for i in range(col, n) if rows[i][col] % p), None)
        if pivot is None:
            return 0
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        pv = rows[col][col] % p
        det = det * pv % p
        inv = mod_inverse(pv, p)
        for i in range(col + 1, n):
            factor = rows[i][col] * inv % p
            if factor:
                rows[i] = [(a - factor * b) % p for a, b in zip(rows[i], rows[col])]
    return det % p


@dataclass(frozen=True)
class Theorem5Result:
    det: int
    predicted: str
    verified: str
    passed: bool


def theorem5_classify(f, p: int) -> Theorem5Result:
    """Predict the square class of det(T) from deg f parity and check it.

    Even degree predicts a nonresidue, odd degree a residue.
    """
    t = power_basis_trace_matrix(f, p)
    det = det_mod_p(t)
    if det == 0:
        raise SingularTraceMatrix(f"trace matrix of {list(t.f)} is singular mod {p}")
    predicted = "QNR" if t.n % 2 == 0 else "QR"
    verified = "QNR" if euler_criterion(det, p) == -1 else "QR"
    return Theorem5Result(det, predicted, verified, predicted == verified)
