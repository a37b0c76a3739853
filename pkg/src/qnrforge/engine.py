"""Deterministic nonresidue construction with certificates.

Two period-based routes are provided.  The general route multiplies out an
even-degree period polynomial that stays irreducible over F_q and reads a
nonresidue off the determinant of its trace matrix.  The special route works
in F_p[y]/Phi_r(y) for r built from 2 and the Fermat primes, projects the
root of unity y to a quadratic subring and returns the discriminant when it
is a constant.  Both routes verify their output with Euler's criterion and
never return an unverified value.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd

from .cyclo import (
    PeriodSpec,
    cyclotomic_cofactor,
    cyclotomic_polynomial,
    period_polynomial,
    period_spec,
    subgroups_of_order,
)
from .errors import (
    FallbackExhausted,
    NoParametersFound,
    NoShortcut,
    QnrError,
    ReduciblePolynomial,
)
from .ffcore import (
    FieldDescriptor,
    QuotientRing,
    as_field,
    frobenius_power,
    partial_trace,
    poly_normalize,
)
from .intmath import euler_phi, multiplicative_order
from .symbols import least_qnr, shortcut_qnr
from .tracemat import det_mod_p, power_basis_trace_matrix

FERMAT_PRIMES = (3, 5, 17, 257, 65537)

# Special-path candidates with phi(r) above this are listed but not computed.
DEFAULT_MAX_RING_DEGREE = 1024

METHODS = ("auto", "special", "general", "least", "class")


@dataclass(frozen=True)
class FermatRSet:
    kmax: int
    members: tuple


def fermat_r_set(kmax: int) -> FermatRSet:
    """All 2^v0 * (product of a subset of the Fermat primes) >= 3, v0 <= kmax."""
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    members = set()
    for v0 in range(kmax + 1):
        for picks in product((0, 1), repeat=len(FERMAT_PRIMES)):
            r = 2**v0
            for f, on in zip(FERMAT_PRIMES, picks):
                if on:
                    r *= f
            if r >= 3:
                members.add(r)
    return FermatRSet(kmax, tuple(sorted(members)))


def default_kmax(q: int) -> int:
    return math.ceil(math.log2(math.log2(q))) + 4


def parameter_bound(q: int) -> int:
    """Largest r allowed by the 4 (ln q)^2 + 16 search bound."""
    return math.ceil(4 * math.log(q) ** 2 + 16) - 1


@dataclass
class QnrCertificate:
    modulus: int
    method: str
    value: int
    r: int | None = None
    d: int | None = None
    e: int | None = None
    m: int | None = None
    verified: bool = False
    transcript: dict = field(default_factory=dict)
    ext_modulus: list | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> QnrCertificate:
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> QnrCertificate:
        return cls.from_dict(json.loads(text))

    @property
    def field(self) -> FieldDescriptor:
        ext = tuple(self.ext_modulus) if self.ext_modulus else None
        return FieldDescriptor(self.modulus, ext)


def _certificate(fd: FieldDescriptor, method: str, value: int, **kwargs) -> QnrCertificate:
    value %= fd.p
    return QnrCertificate(
        modulus=fd.p,
        method=method,
        value=value,
        verified=fd.euler(value) == -1,
        ext_modulus=list(fd.ext_modulus) if fd.ext_modulus else None,
        **kwargs,
    )


# ---------------------------------------------------------------------------
# General route


@dataclass(frozen=True)
class PeriodParameters:
    r: int
    d: int
    e: int
    spec: PeriodSpec


@lru_cache(maxsize=200_000)
def _complement_subgroup(r: int, q_mod_r: int):
    """Subgroup K with <q> x K = (Z/r)^* and even ord_r(q), or None."""
    d = multiplicative_order(q_mod_r, r)
    if d % 2:
        return None
    generated = set()
    x = 1
    for _ in range(d):
        generated.add(x)
        x = x * q_mod_r % r
    for k in subgroups_of_order(r, euler_phi(r) // d):
        if generated.isdisjoint(k[1:]):
            return d, k
    return None


def candidate_period_parameters(q, bound: int):
    """Admissible (r, d, e, spec) in ascending r up to ``bound``."""
    qv = as_field(q).q
    for r in range(3, bound + 1):
        if gcd(r, qv) != 1:
            continue
        found = _complement_subgroup(r, qv % r)
        if found is None:
            continue
        d, k = found
        yield PeriodParameters(r, d, euler_phi(r) // d, period_spec(r, d, k))


def find_period_parameters(q, bound: int | None = None) -> PeriodParameters:
    """Smallest r <= bound with ord_r(q) = d even and a complement K of <q>."""
    qv = as_field(q).q
    if bound is None:
        bound = parameter_bound(qv)
    for params in candidate_period_parameters(q, bound):
        return params
    raise NoParametersFound(f"no admissible conductor r <= {bound} for q = {qv}")


def qnr_general(q, bound: int | None = None) -> QnrCertificate:
    """Nonresidue as the determinant of the trace matrix of an irreducible psi_r."""
    fd = as_field(q)
    p = fd.p
    if bound is None:
        bound = parameter_bound(fd.q)
    rejected = []
    for params in candidate_period_parameters(fd, bound):
        psi = period_polynomial(params.r, params.d, params.spec.subgroup)
        psi_p = poly_normalize(psi.coeffs, p)
        entry = {"r": params.r, "d": params.d, "subgroup": list(params.spec.subgroup)}
        try:
            tm = power_basis_trace_matrix(psi_p, p, ext_degree=fd.degree)
        except ReduciblePolynomial:
            rejected.append({**entry, "reason": "reducible"})
            continue
        det = det_mod_p(tm)
        if det == 0:
            rejected.append({**entry, "reason": "singular_trace_matrix"})
            continue
        if fd.euler(det) != -1:
            rejected.append({**entry, "reason": "det_not_qnr", "det": det})
            continue
        transcript = {
            "subgroup": list(params.spec.subgroup),
            "psi": list(psi.coeffs),
            "psi_mod_p": psi_p,
            "trace_matrix": [list(row) for row in tm.entries],
            "det": det,
            "rejected": rejected,
        }
        return _certificate(
            fd, "general", det, r=params.r, d=params.d, e=params.e, transcript=transcript
        )
    raise NoParametersFound(f"no conductor r <= {bound} gave a verified nonresidue mod {fd.q}")


# ---------------------------------------------------------------------------
# Special route


def cyclotomic_ring(fd: FieldDescriptor, r: int) -> QuotientRing:
    """F_p[y]/Phi_r(y) with q-Frobenius; y is a primitive r-th root of unity."""
    return QuotientRing(
        fd.p,
        cyclotomic_polynomial(r).reduce(fd.p),
        q=fd.q,
        root_order=r,
        cofactor=cyclotomic_cofactor(r).coeffs,
    )


def special_candidate(fd: FieldDescriptor, r: int, ring: QuotientRing | None = None) -> dict:
    """Run the quadratic projection for one conductor r; returns an outcome record."""
    qv = fd.q
    if gcd(r, qv) != 1:
        return {"r": r, "status": "skipped", "reason": "not_coprime"}
    d = multiplicative_order(qv % r, r)
    if d == 1:
        return {"r": r, "status": "skipped", "reason": "order_one"}
    m = d.bit_length() - 1
    if 1 << m != d:
        return {"r": r, "status": "skipped", "reason": "order_not_power_of_two", "d": d}
    if ring is None:
        ring = cyclotomic_ring(fd, r)
    omega = ring.gen()
    tau = partial_trace(omega, 2, 1 << (m - 1))
    tau_q = frobenius_power(tau, 1)
    base = {"r": r, "d": d, "m": m, "phi": euler_phi(r)}
    if tau_q == tau:
        return {**base, "status": "rejected", "reason": "degenerate_tau", "tau": list(tau.coeffs)}
    disc = (tau - tau_q) ** 2
    if not disc.is_constant():
        return {**base, "status": "rejected", "reason": "nonconstant_D", "D": list(disc.coeffs)}
    value = disc.constant_value()
    if fd.euler(value) != -1:
        return {**base, "status": "rejected", "reason": "constant_D_not_qnr", "D": [value]}
    return {**base, "status": "accepted", "D": value, "tau": list(tau.coeffs), "tau_q": list(tau_q.coeffs)}


def qnr_special(q, kmax: int | None = None, max_ring_degree: int = DEFAULT_MAX_RING_DEGREE) -> QnrCertificate:
    """Nonresidue as the discriminant of a quadratic period over the Fermat set."""
    fd = as_field(q)
    if kmax is None:
        kmax = default_kmax(fd.q)
    rejected, skipped = [], []
    for r in fermat_r_set(kmax).members:
        if euler_phi(r) > max_ring_degree and gcd(r, fd.q) == 1:
            if multiplicative_order(fd.q % r, r) > 1:
                skipped.append({"r": r, "reason": "exceeds_desk_scale", "phi": euler_phi(r)})
                continue
        outcome = special_candidate(fd, r)
        status = outcome.pop("status")
        if status == "skipped":
            skipped.append(outcome)
        elif status == "rejected":
            rejected.append(outcome)
        else:
            transcript = {
                "D": outcome["D"],
                "tau": outcome["tau"],
                "tau_q": outcome["tau_q"],
                "order_equals_phi": outcome["d"] == outcome["phi"],
                "kmax": kmax,
                "rejected": rejected,
                "skipped": skipped,
            }
            return _certificate(
                fd,
                "special",
                outcome["D"],
                r=r,
                d=outcome["d"],
                e=outcome["phi"] // outcome["d"],
                m=outcome["m"],
                transcript=transcript,
            )
    transcript = {"kmax": kmax, "rejected": rejected, "skipped": skipped}
    raise FallbackExhausted(f"no r in the Fermat set (kmax={kmax}) worked for q = {fd.q}", transcript)


# ---------------------------------------------------------------------------
# Elementary routes and the chain


def qnr_least(q) -> QnrCertificate:
    fd = as_field(q)
    return _certificate(fd, "least", least_qnr(fd.p))


def qnr_class(q) -> QnrCertificate:
    fd = as_field(q)
    z = shortcut_qnr(fd.p)
    return _certificate(fd, "class", z, transcript={"p_mod_8": fd.p % 8})


def qnr_auto(q) -> QnrCertificate:
    """Shortcut, then special, then general, then least; first verified value wins."""
    fd = as_field(q)
    chain = []
    steps = [("special", qnr_special), ("general", qnr_general), ("least", qnr_least)]
    if fd.is_prime_field:
        steps.insert(0, ("class", qnr_class))
    for name, fn in steps:
        try:
            cert = fn(fd)
        except (NoShortcut, FallbackExhausted, NoParametersFound) as exc:
            chain.append({"method": name, "outcome": type(exc).__name__})
            continue
        if not cert.verified:
            chain.append({"method": name, "outcome": "unverified"})
            continue
        chain.append({"method": name, "outcome": "ok"})
        cert.transcript = {**cert.transcript, "chain": chain}
        return cert
    raise QnrError(f"every method failed for q = {fd.q}")


def construct_qnr(q, method: str = "auto") -> QnrCertificate:
    dispatch = {
        "auto": qnr_auto,
        "special": qnr_special,
        "general": qnr_general,
        "least": qnr_least,
        "class": qnr_class,
    }
    if method not in dispatch:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    return dispatch[method](q)
