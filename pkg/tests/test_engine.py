import pytest

from qnrforge.engine import (
    QnrCertificate,
    construct_qnr,
    default_kmax,
    fermat_r_set,
    find_period_parameters,
    qnr_auto,
    qnr_class,
    qnr_general,
    qnr_least,
    qnr_special,
    special_candidate,
)
from qnrforge.errors import FallbackExhausted, InvalidModulus, NoParametersFound, NoShortcut
from qnrforge.ffcore import FieldDescriptor
from qnrforge.intmath import euler_phi, factorize, multiplicative_order, odd_primes_below


def test_fermat_set_examples():
    assert fermat_r_set(0).members[:8] == (3, 5, 15, 17, 51, 85, 255, 257)
    two = fermat_r_set(2).members
    assert two[:12] == (3, 4, 5, 6, 10, 12, 15, 17, 20, 30, 34, 51)
    for k in range(5):
        assert 3 in fermat_r_set(k).members


def test_fermat_set_factorizations():
    members = fermat_r_set(3).members
    assert list(members) == sorted(set(members))
    for r in members:
        assert r >= 3
        assert {p for p, _ in factorize(r)} <= {2, 3, 5, 17, 257, 65537}
        assert all(k == 1 for p, k in factorize(r) if p != 2)


def test_fermat_set_negative():
    with pytest.raises(ValueError):
        fermat_r_set(-1)


@pytest.mark.parametrize("q,r,d,e", [(7, 4, 2, 1), (13, 5, 4, 1), (3, 4, 2, 1)])
def test_find_period_parameters_examples(q, r, d, e):
    params = find_period_parameters(q)
    assert (params.r, params.d, params.e) == (r, d, e)


def test_find_period_parameters_small_bound():
    with pytest.raises(NoParametersFound):
        find_period_parameters(13, bound=4)


def test_find_period_parameters_complement():
    for q in odd_primes_below(3000):
        params = find_period_parameters(q)
        k = set(params.spec.subgroup)
        assert multiplicative_order(q % params.r, params.r) == params.d
        assert params.d % 2 == 0
        powers = {pow(q, i, params.r) for i in range(params.d)}
        assert powers & k == {1}


def test_general_examples():
    c = qnr_general(7)
    assert (c.value, c.r) == (3, 4)
    assert c.transcript["psi"] == [1, 0, 1]
    assert c.transcript["trace_matrix"] == [[2, 0], [0, 5]]
    c = qnr_general(5)
    assert (c.value, c.r, c.transcript["psi"]) == (2, 3, [1, 1, 1])
    c = qnr_general(109)
    assert (c.value, c.r, c.transcript["subgroup"], c.transcript["psi"]) == (101, 8, [1, 3], [2, 0, 1])


def test_special_examples():
    c = qnr_special(5)
    assert (c.value, c.r) == (2, 3)
    c = qnr_special(7)
    assert (c.value, c.r) == (3, 4)
    c = qnr_special(109)
    assert (c.value, c.r, c.m) == (17, 17, 4)
    reasons = {e["r"]: e["reason"] for e in c.transcript["rejected"]}
    assert reasons == {5: "nonconstant_D", 8: "nonconstant_D", 10: "nonconstant_D", 15: "nonconstant_D", 16: "degenerate_tau"}
    skipped = {e["r"]: e["reason"] for e in c.transcript["skipped"]}
    assert skipped[12] == "order_one"


def test_special_rejection_records_have_evidence():
    c = qnr_special(109)
    for entry in c.transcript["rejected"]:
        if entry["reason"] == "nonconstant_D":
            assert len(entry["D"]) > 1
        else:
            assert "tau" in entry


def test_special_candidate_outcomes():
    fd = FieldDescriptor(109)
    assert special_candidate(fd, 109 * 3)["reason"] == "not_coprime"
    assert special_candidate(fd, 3)["reason"] == "order_one"
    assert special_candidate(fd, 17)["status"] == "accepted"


def test_special_fallback_exhausted_has_transcript():
    with pytest.raises(FallbackExhausted) as info:
        qnr_special(349)
    tr = info.value.transcript
    seen = {e["r"] for e in tr["rejected"]} | {e["r"] for e in tr["skipped"]}
    assert seen == set(fermat_r_set(tr["kmax"]).members)


def test_special_minus_three():
    for p in odd_primes_below(2000):
        if p % 3 == 2:
            c = qnr_special(p)
            assert (c.value, c.r) == (p - 3, 3)


def test_special_accepted_order_is_phi():
    for p in odd_primes_below(1500):
        try:
            c = qnr_special(p)
        except FallbackExhausted:
            continue
        assert c.d == euler_phi(c.r)


def test_auto_examples():
    c = qnr_auto(7)
    assert (c.value, c.method) == (6, "class")
    c = qnr_auto(17)
    assert (c.value, c.method, c.r) == (14, "special", 3)
    assert c.transcript["chain"][0] == {"method": "class", "outcome": "NoShortcut"}
    assert qnr_auto(3).value == 2


def test_auto_falls_through_to_general():
    c = qnr_auto(769)
    assert c.method == "general" and c.verified
    assert [s["method"] for s in c.transcript["chain"]] == ["class", "special", "general"]


def test_class_and_least():
    assert qnr_class(11).value == 2
    with pytest.raises(NoShortcut):
        qnr_class(17)
    assert qnr_least(73).value == 5


def test_extension_field_certificates():
    fd = FieldDescriptor(3, (1, 2, 0, 1))
    for method in ("auto", "special", "general", "least"):
        c = construct_qnr(fd, method)
        assert c.verified and fd.euler(c.value) == -1
        assert c.ext_modulus == [1, 2, 0, 1]


def test_default_kmax():
    assert default_kmax(5) == 6
    assert default_kmax(109) == 7


def test_certificate_json_roundtrip():
    for q in (7, 17, 109, 349):
        c = qnr_auto(q)
        again = QnrCertificate.from_json(c.to_json())
        assert again == c
        assert again.to_json() == c.to_json()


def test_invalid_inputs():
    with pytest.raises(InvalidModulus):
        qnr_auto(2)
    with pytest.raises(InvalidModulus):
        qnr_auto(15)
    with pytest.raises(ValueError):
        construct_qnr(7, "magic")
