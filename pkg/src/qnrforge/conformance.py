"""Sweeps that re-check every module's invariants over a range of primes.

Each check runs per prime and returns a small record; records are merged in
ascending prime order, so the report is the same whether or not the sweep
ran in a worker pool.  Set QNRFORGE_WORKERS to fan out across processes.

Checks that enumerate polynomials or residues exhaustively cap their own
prime range (see CHECK_LIMITS) so a large --max-prime stays affordable.
"""

from __future__ import annotations

import json
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .cyclo import (
    closed_form_psi2,
    closed_form_theta4,
    factor_degree_check,
    link_psi_theta,
    period_polynomial,
    period_spec,
)
from .engine import (
    fermat_r_set,
    find_period_parameters,
    parameter_bound,
    qnr_auto,
    qnr_general,
    qnr_least,
    qnr_special,
)
from .errors import DegeneratePair, FallbackExhausted, QnrError
from .ffcore import poly_normalize, rabin_irreducible
from .intmath import euler_phi, primes_up_to, two_adic_split
from .irrpoly import MobiusMap, binomial_tower, mobius_generate
from .roots import cipolla_sum, tonelli_shanks
from .symbols import euler_criterion, jacobi, least_qnr, qnr_spaced_pair
from .tracemat import theorem5_classify

CHECKS = ("qnr", "params", "closed_forms", "theorem5", "theorem1", "jacobi", "roots", "pairs", "irr")

# Upper bound (exclusive) on the primes each check visits; None = max_prime.
CHECK_LIMITS = {
    "closed_forms": 300,
    "theorem5": 200,
    "theorem1": 60,
    "jacobi": 2000,
    "roots": 2000,
    "pairs": 2000,
    "irr": 200,
}

_CUBIC_LIMIT = 50
_CIPOLLA_LIMIT = 500
_CIPOLLA_MAX_V2 = 8
_MOBIUS_LIMIT = 50
_MOBIUS_MAPS = 50


@dataclass
class ConformanceReport:
    range: int
    checks: list
    counts: dict = field(default_factory=dict)
    special_rejections: dict = field(default_factory=dict)
    special_accepted: dict = field(default_factory=dict)
    special_fallback: list = field(default_factory=list)
    observations: dict = field(default_factory=dict)
    anomalies: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kwargs)

    @property
    def failed(self) -> int:
        return sum(c["fail"] for c in self.counts.values())


class _Tally:
    """Per-prime accumulator; merged into the report afterwards."""

    def __init__(self, p: int):
        self.p = p
        self.counts: dict[str, list[int]] = {}
        self.anomalies: list[dict] = []
        self.extra: dict = {}

    def record(self, name: str, ok: bool, inputs=None, expected=None, observed=None):
        slot = self.counts.setdefault(name, [0, 0])
        slot[0 if ok else 1] += 1
        if not ok:
            self.anomalies.append(
                {"check": name, "input": inputs, "expected": expected, "observed": observed}
            )


def _check_qnr(t: _Tally):
    p = t.p
    for name, fn in (("qnr.auto", qnr_auto), ("qnr.general", qnr_general), ("qnr.least", qnr_least)):
        try:
            cert = fn(p)
            ok = cert.verified and pow(cert.value, (p - 1) // 2, p) == p - 1
            t.record(name, ok, {"p": p}, "verified nonresidue", cert.value)
        except QnrError as exc:
            t.record(name, False, {"p": p}, "verified nonresidue", type(exc).__name__)
    t.extra["least_qnr"] = least_qnr(p)

    try:
        cert = qnr_special(p)
    except FallbackExhausted as exc:
        tr = exc.transcript
        seen = {e["r"] for e in tr["rejected"]} | {e["r"] for e in tr["skipped"]}
        complete = seen == set(fermat_r_set(tr["kmax"]).members)
        t.record("qnr.special", complete, {"p": p}, "complete rejection transcript", sorted(seen))
        t.extra["special"] = {"accepted": None, "rejected": tr["rejected"]}
        return
    ok = cert.verified
    t.record("qnr.special", ok, {"p": p}, "verified nonresidue", cert.value)
    if p % 3 == 2:
        t.record("qnr.special.minus3", cert.value == p - 3, {"p": p}, p - 3, cert.value)
    t.extra["special"] = {
        "accepted": cert.r,
        "order_equals_phi": cert.d == euler_phi(cert.r),
        "rejected": cert.transcript["rejected"],
    }


def _check_params(t: _Tally):
    q = t.p
    bound = parameter_bound(q)
    try:
        params = find_period_parameters(q)
    except QnrError as exc:
        t.record("params.exists", False, {"q": q}, f"r <= {bound}", type(exc).__name__)
        return
    t.record("params.exists", params.r <= bound, {"q": q}, f"r <= {bound}", params.r)
    psi = period_polynomial(params.r, params.d, params.spec.subgroup)
    ok = rabin_irreducible(poly_normalize(psi.coeffs, q), q)
    t.record("params.irreducible", ok, {"q": q, "r": params.r}, "irreducible psi", list(psi.coeffs))


def _check_closed_forms(t: _Tally):
    r = t.p
    psi2 = period_polynomial(r, 2)
    t.record("closed.psi2", closed_form_psi2(r) == psi2, {"r": r}, list(closed_form_psi2(r).coeffs), list(psi2.coeffs))
    theta2 = link_psi_theta(psi2, 2, "psi->theta")
    sign = -1 if (r - 1) // 2 % 2 else 1
    t.record("closed.theta2", list(theta2.coeffs) == [-sign * r, 0, 1], {"r": r}, [-sign * r, 0, 1], list(theta2.coeffs))
    back = link_psi_theta(theta2, 2, "theta->psi")
    t.record("closed.roundtrip2", back == psi2, {"r": r}, list(psi2.coeffs), list(back.coeffs))
    if r % 4 == 1:
        psi4 = period_polynomial(r, 4)
        theta4 = link_psi_theta(psi4, 4, "psi->theta")
        closed = closed_form_theta4(r)
        t.record("closed.theta4", theta4 == closed, {"r": r}, list(closed.coeffs), list(theta4.coeffs))
        back = link_psi_theta(theta4, 4, "theta->psi")
        t.record("closed.roundtrip4", back == psi4, {"r": r}, list(psi4.coeffs), list(back.coeffs))


def _irreducible_quadratics(p):
    for b in range(p):
        for c in range(p):
            if euler_criterion(b * b - 4 * c, p) == -1:
                yield [c, b, 1]


def _irreducible_cubics(p):
    # a cubic with no root in F_p is irreducible
    cubes = [x * x * x for x in range(p)]
    squares = [x * x for x in range(p)]
    for a in range(p):
        for b in range(p):
            hit = {-(cubes[x] + a * squares[x] + b * x) % p for x in range(p)}
            for c in range(p):
                if c not in hit:
                    yield [c, b, a, 1]


def _check_theorem5(t: _Tally):
    p = t.p
    families = [("theorem5.quadratic", _irreducible_quadratics(p))]
    if p < _CUBIC_LIMIT:
        families.append(("theorem5.cubic", _irreducible_cubics(p)))
    for name, polys in families:
        for f in polys:
            try:
                res = theorem5_classify(f, p)
                t.record(name, res.passed, {"p": p, "f": f}, res.predicted, res.verified)
            except QnrError as exc:
                t.record(name, False, {"p": p, "f": f}, "classification", type(exc).__name__)


def _check_theorem1(t: _Tally):
    q = t.p
    for r in primes_up_to(CHECK_LIMITS["theorem1"] - 1):
        if r == q:
            continue
        for d in (2, 4):
            if (r - 1) % d:
                continue
            res = factor_degree_check(r, q, period_spec(r, d))
            t.record("theorem1", res.passed, {"r": r, "q": q, "d": d}, res.predicted, list(res.degrees))


def _check_jacobi(t: _Tally):
    p = t.p
    bad = [a for a in range(1, p) if jacobi(a, p) != euler_criterion(a, p)]
    t.record("jacobi", not bad, {"p": p}, "jacobi = euler for all a", bad[:10])


def _check_roots(t: _Tally):
    p = t.p
    z = least_qnr(p)
    k, _ = two_adic_split(p - 1)
    with_cipolla = p < _CIPOLLA_LIMIT and k <= _CIPOLLA_MAX_V2
    for a in range(p):
        if euler_criterion(a, p) == -1:
            continue
        ts = tonelli_shanks(a, p, z)
        t.record("roots.tonelli", ts.root * ts.root % p == a, {"a": a, "p": p}, a, ts.root * ts.root % p)
        if with_cipolla:
            cs = cipolla_sum(a, p, z)
            agree = cs.method == "cipolla" and {cs.root, cs.other_root} == {ts.root, ts.other_root}
            t.record("roots.cipolla", agree, {"a": a, "p": p, "z": z}, [ts.root, ts.other_root], [cs.root, list(cs.notes)])


def _check_pairs(t: _Tally):
    p = t.p
    z = least_qnr(p)
    degenerate = 0
    for i in range(1, 21):
        s = i * i
        if s % p == 0:
            continue
        for v in (1, 2, 3):
            if v % p == 0:
                continue
            try:
                u, w = qnr_spaced_pair(z, s, v, p)
            except DegeneratePair:
                degenerate += 1
                continue
            ok = euler_criterion(u, p) == -1 and euler_criterion(w, p) == -1 and (u - w) % p == v
            t.record("pairs", ok, {"z": z, "s": s, "v": v, "p": p}, "two nonresidues v apart", [u, w])
    t.extra["pairs_degenerate"] = degenerate


def _mobius_maps(p):
    # fixed arithmetic progression of maps; no randomness outside the bench
    maps = []
    step = 0
    while len(maps) < _MOBIUS_MAPS and step < 20 * _MOBIUS_MAPS:
        m = MobiusMap(step % p, (3 * step + 1) % p, (5 * step + 2) % p, (7 * step + 3) % p)
        if m.det(p):
            maps.append(m)
        step += 1
    return maps


def _check_irr(t: _Tally):
    q = t.p
    z = qnr_auto(q).value
    for e in (1, 2, 3):
        try:
            res = binomial_tower(q, e, z)
            ok = rabin_irreducible(res.poly, q) and len(res.poly) - 1 == 1 << e
            t.record("irr.tower", ok, {"q": q, "e": e}, "irreducible", res.poly)
        except QnrError as exc:
            t.record("irr.tower", False, {"q": q, "e": e}, "irreducible", type(exc).__name__)
    if q >= _MOBIUS_LIMIT:
        return
    bases = [next(_irreducible_quadratics(q)), next(_irreducible_cubics(q))]
    for f in bases:
        for m in _mobius_maps(q):
            g = mobius_generate(f, m, q)
            t.record("irr.mobius", rabin_irreducible(g, q), {"q": q, "f": f, "map": list(asdict(m).values())}, "irreducible", g)


_RUNNERS = {
    "qnr": _check_qnr,
    "params": _check_params,
    "closed_forms": _check_closed_forms,
    "theorem5": _check_theorem5,
    "theorem1": _check_theorem1,
    "jacobi": _check_jacobi,
    "roots": _check_roots,
    "pairs": _check_pairs,
    "irr": _check_irr,
}


def _run_one(task):
    check, p = task
    t = _Tally(p)
    _RUNNERS[check](t)
    return check, p, t.counts, t.anomalies, t.extra


def _tasks(max_prime: int, checks):
    for check in checks:
        limit = CHECK_LIMITS.get(check)
        top = max_prime if limit is None else min(max_prime, limit - 1)
        for p in primes_up_to(top):
            if p > 2:
                yield check, p


def parse_checks(spec) -> list[str]:
    if spec is None or spec == "all":
        return list(CHECKS)
    names = spec.split(",") if isinstance(spec, str) else list(spec)
    names = [n.strip() for n in names if n.strip()]
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks {unknown}; choose from {', '.join(CHECKS)}")
    return [c for c in CHECKS if c in names]


def run_conformance(max_prime: int, checks="all", workers: int | None = None) -> ConformanceReport:
    if max_prime < 3:
        raise ValueError(f"max_prime must be >= 3, got {max_prime}")
    selected = parse_checks(checks)
    if workers is None:
        workers = int(os.environ.get("QNRFORGE_WORKERS", "1"))
    tasks = list(_tasks(max_prime, selected))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, tasks, chunksize=8))
    else:
        results = [_run_one(task) for task in tasks]
    results.sort(key=lambda item: (selected.index(item[0]), item[1]))

    report = ConformanceReport(range=max_prime, checks=selected)
    counts: dict[str, list[int]] = {}
    rejections: dict[int, Counter] = {}
    accepted = Counter()
    order_match = Counter()
    least = {}
    degenerate_pairs = 0
    for _check, p, c, anomalies, extra in results:
        for name, (ok, bad) in c.items():
            slot = counts.setdefault(name, [0, 0])
            slot[0] += ok
            slot[1] += bad
        report.anomalies.extend(anomalies)
        if "special" in extra:
            sp = extra["special"]
            for rej in sp["rejected"]:
                rejections.setdefault(rej["r"], Counter())[rej["reason"]] += 1
            if sp["accepted"] is None:
                report.special_fallback.append(p)
            else:
                accepted[sp["accepted"]] += 1
                order_match[sp["order_equals_phi"]] += 1
        if "least_qnr" in extra:
            least[p] = extra["least_qnr"]
        degenerate_pairs += extra.get("pairs_degenerate", 0)

    report.counts = {
        name: {"pass": ok, "fail": bad, "total": ok + bad} for name, (ok, bad) in sorted(counts.items())
    }
    report.special_rejections = {str(r): dict(sorted(v.items())) for r, v in sorted(rejections.items())}
    report.special_accepted = {str(r): n for r, n in sorted(accepted.items())}
    if order_match:
        report.observations["special_accepted_order_equals_phi"] = {
            "yes": order_match[True],
            "no": order_match[False],
        }
    if least:
        top = max(least, key=lambda p: (least[p], -p))
        report.observations["least_qnr_max"] = {"p": top, "z": least[top]}
    if "pairs" in selected:
        report.observations["pairs_degenerate"] = degenerate_pairs
    return report
