import pytest

from qnrforge.bench import bench_randomized, random_prime
from qnrforge.conformance import CHECKS, parse_checks, run_conformance
from qnrforge.intmath import is_prime


@pytest.fixture(scope="module")
def report_100():
    return run_conformance(100, [c for c in CHECKS if c != "theorem5"])


def test_conformance_100_clean(report_100):
    assert report_100.anomalies == []
    for name, tally in report_100.counts.items():
        assert tally["pass"] + tally["fail"] == tally["total"], name
        assert tally["fail"] == 0, name
    assert report_100.special_fallback == []


def test_conformance_theorem5_small():
    r = run_conformance(23, "theorem5")
    assert r.counts["theorem5.quadratic"]["fail"] == 0
    assert r.counts["theorem5.cubic"]["total"] > 0


def test_conformance_single_prime():
    r = run_conformance(3, "qnr")
    assert r.counts["qnr.auto"] == {"pass": 1, "fail": 0, "total": 1}
    assert r.special_accepted == {"4": 1}


def test_conformance_special_histogram():
    r = run_conformance(800, "qnr")
    assert r.special_fallback == [349, 769]
    assert r.special_rejections["16"]["degenerate_tau"] >= 1
    assert r.observations["special_accepted_order_equals_phi"]["no"] == 0


def test_conformance_is_deterministic():
    a = run_conformance(60, "qnr,pairs,roots")
    b = run_conformance(60, ["roots", "pairs", "qnr"])
    assert a.to_json() == b.to_json()


def test_conformance_workers_match_serial():
    a = run_conformance(80, "qnr,jacobi,irr", workers=1)
    b = run_conformance(80, "qnr,jacobi,irr", workers=2)
    assert a.to_json() == b.to_json()


def test_parse_checks():
    assert parse_checks("all") == list(CHECKS)
    assert parse_checks("roots, qnr") == ["qnr", "roots"]
    with pytest.raises(ValueError):
        parse_checks("qnr,bogus")
    with pytest.raises(ValueError):
        run_conformance(2)


def test_anomalies_iff_failures(monkeypatch):
    import qnrforge.conformance as conf

    monkeypatch.setattr(conf, "jacobi", lambda a, n: 1)
    r = run_conformance(20, "jacobi")
    assert r.failed > 0 and len(r.anomalies) == r.failed
    assert r.anomalies[0]["check"] == "jacobi"


def test_bench_examples():
    r = bench_randomized(8, 1000, 1)
    assert 1.8 <= r.mean_trials <= 2.2
    r = bench_randomized(3, 1, 1)
    assert r.distinct_primes == 1 and r.mean_trials >= 1
    r = bench_randomized(16, 100, 7)
    assert set(r.timings) == {"auto", "general", "least"}


def test_bench_is_seeded():
    a = bench_randomized(10, 200, 5)
    b = bench_randomized(10, 200, 5)
    assert a.deterministic_dict() == b.deterministic_dict()
    assert a.deterministic_dict() != bench_randomized(10, 200, 6).deterministic_dict()


def test_random_prime_bits():
    import random

    rng = random.Random(0)
    for bits in (3, 8, 20):
        for _ in range(20):
            p = random_prime(bits, rng)
            assert p.bit_length() == bits and is_prime(p) and p > 2


def test_bench_rejects():
    with pytest.raises(ValueError):
        bench_randomized(2, 1, 1)
    with pytest.raises(ValueError):
        bench_randomized(8, 0, 1)
