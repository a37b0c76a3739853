import itertools
from math import gcd

import mpmath
import pytest

from qnrforge.cyclo import (
    CyclotomicInteger,
    IntegerPolynomial,
    QuadraticPartition,
    closed_form_psi2,
    closed_form_theta4,
    coperiod_from_period,
    coperiod_polynomial,
    cyclotomic_cofactor,
    cyclotomic_polynomial,
    factor_degree_check,
    gauss_periods,
    link_psi_theta,
    linear_factors,
    period_polynomial,
    period_spec,
    product_tree_poly,
    quadratic_partition,
    subgroups_of_order,
)
from qnrforge.errors import (
    DeskScaleExceeded,
    InvalidConductor,
    NonIntegerCoefficients,
    NonIntegerResult,
    NoSuchSubgroup,
)
from qnrforge.ffcore import poly_mod, poly_normalize
from qnrforge.intmath import divisors, euler_phi, is_prime, primes_up_to

mpmath.mp.prec = 80


def numeric_period_poly(spec):
    """Multiply out prod (x - eta_j) in 80-bit complex arithmetic and round."""
    coeffs = [mpmath.mpc(1)]
    for coset in spec.cosets:
        eta = mpmath.fsum(mpmath.expjpi(mpmath.mpf(2 * x) / spec.r) for x in coset)
        nxt = [mpmath.mpc(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= eta * c
        coeffs = nxt
    out = []
    for c in coeffs:
        assert abs(c.imag) < 1e-12
        n = int(mpmath.nint(c.real))
        assert abs(c.real - n) < 1e-12
        out.append(n)
    return tuple(out)


def numeric_cyclotomic(r):
    coeffs = [mpmath.mpc(1)]
    for k in range(1, r + 1):
        if gcd(k, r) != 1:
            continue
        w = mpmath.expjpi(mpmath.mpf(2 * k) / r)
        nxt = [mpmath.mpc(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= w * c
        coeffs = nxt
    return tuple(int(mpmath.nint(c.real)) for c in coeffs)


@pytest.mark.parametrize(
    "r,want",
    [
        (1, (-1, 1)),
        (4, (1, 0, 1)),
        (5, (1, 1, 1, 1, 1)),
        (15, (1, -1, 0, 1, -1, 1, 0, -1, 1)),
    ],
)
def test_cyclotomic_examples(r, want):
    assert cyclotomic_polynomial(r).coeffs == want


def test_phi_105_has_minus_two():
    assert -2 in cyclotomic_polynomial(105).coeffs


@pytest.mark.parametrize("r", [6, 12, 20, 21, 30, 36, 45, 48])
def test_cyclotomic_matches_numeric_roots(r):
    assert cyclotomic_polynomial(r).coeffs == numeric_cyclotomic(r)


@pytest.mark.parametrize("r", [3, 8, 15, 17, 60, 255])
def test_cofactor_times_phi_is_y_r_minus_one(r):
    from qnrforge.ffcore import int_poly_mul

    prod = int_poly_mul(cyclotomic_polynomial(r).coeffs, cyclotomic_cofactor(r).coeffs)
    assert prod == [-1] + [0] * (r - 1) + [1]


def test_period_spec_examples():
    s = period_spec(5, 2)
    assert s.subgroup == (1, 4) and s.cosets == ((1, 4), (2, 3))
    s = period_spec(4, 2)
    assert s.subgroup == (1,) and s.cosets == ((1,), (3,))
    s = period_spec(13, 4)
    assert s.e == 3 and s.subgroup == (1, 3, 9)


@pytest.mark.parametrize("r", [8, 12, 15, 16, 20, 21, 24])
def test_period_spec_noncyclic_partitions(r):
    for d in divisors(euler_phi(r)):
        try:
            s = period_spec(r, d)
        except NoSuchSubgroup:
            assert not subgroups_of_order(r, euler_phi(r) // d)
            continue
        k = set(s.subgroup)
        assert len(k) == s.e and s.d * s.e == euler_phi(r)
        assert all(a * b % r in k for a in k for b in k)
        flat = sorted(itertools.chain.from_iterable(s.cosets))
        assert flat == [a for a in range(1, r) if gcd(a, r) == 1]


def test_period_spec_errors():
    with pytest.raises(InvalidConductor):
        period_spec(2, 1)
    with pytest.raises(NoSuchSubgroup):
        period_spec(7, 4)
    with pytest.raises(NoSuchSubgroup):
        period_spec(13, 4, subgroup=(1, 5, 8, 12))


def test_gauss_period_examples():
    eta = gauss_periods(period_spec(5, 2))
    assert eta[0] == CyclotomicInteger.zeta_power(5, 1) + CyclotomicInteger.zeta_power(5, 4)
    eta = gauss_periods(period_spec(4, 2))
    assert eta[1] == -CyclotomicInteger.zeta_power(4, 1)
    eta = gauss_periods(period_spec(3, 2))
    assert eta[1] == CyclotomicInteger.constant(3, -1) - CyclotomicInteger.zeta_power(3, 1)


def test_product_tree_examples():
    eta = gauss_periods(period_spec(5, 2))
    single = product_tree_poly(linear_factors(eta[:1]))
    assert len(single) == 2
    assert period_polynomial(5, 2).coeffs == (-1, 1, 1)
    assert period_polynomial(7, 2).coeffs == (2, 1, 1)
    assert period_polynomial(3, 2).coeffs == (1, 1, 1)


@pytest.mark.parametrize(
    "r,d",
    [(13, 4), (13, 3), (13, 6), (17, 4), (17, 8), (31, 5), (31, 6), (37, 4), (41, 8), (61, 6), (73, 8), (97, 4)],
)
def test_period_polynomial_matches_complex_oracle(r, d):
    spec = period_spec(r, d)
    assert period_polynomial(r, d).coeffs == numeric_period_poly(spec)


@pytest.mark.parametrize("r,d,k", [(8, 2, (1, 3)), (15, 2, (1, 2, 4, 8)), (21, 3, None)])
def test_period_polynomial_composite_conductors(r, d, k):
    spec = period_spec(r, d, k)
    assert period_polynomial(r, d, spec.subgroup).coeffs == numeric_period_poly(spec)


def test_non_subgroup_product_is_not_integral():
    # cosets of a non-subgroup leave zeta in the coefficients
    from qnrforge.cyclo import _demote

    roots = [CyclotomicInteger.zeta_power(7, 1), CyclotomicInteger.zeta_power(7, 2)]
    with pytest.raises(NonIntegerCoefficients):
        _demote(product_tree_poly(linear_factors(roots)))


@pytest.mark.parametrize("r", [p for p in primes_up_to(299) if p > 2])
def test_period_sums_to_minus_one(r):
    for d in (2, 4):
        if (r - 1) % d == 0:
            psi = period_polynomial(r, d)
            assert psi.coeffs[-1] == 1 and psi.coeffs[-2] == 1


@pytest.mark.parametrize("r,want", [(3, (1, 1, 1)), (5, (-1, 1, 1)), (7, (2, 1, 1))])
def test_closed_form_psi2_examples(r, want):
    assert closed_form_psi2(r).coeffs == want


def test_closed_form_psi2_rejects():
    for r in (1, 4, 9, 15):
        with pytest.raises(InvalidConductor):
            closed_form_psi2(r)


@pytest.mark.parametrize("r,a,b", [(5, 1, 2), (17, 1, 4), (13, -3, 2)])
def test_quadratic_partition_examples(r, a, b):
    part = quadratic_partition(r)
    assert (part.a, part.b) == (a, b)


def test_quadratic_partition_rejects():
    with pytest.raises(InvalidConductor):
        quadratic_partition(7)


def _expand(outer_shift, r, a):
    # (x^2 + outer_shift)^2 - 4 r (x - a)^2
    sq = [outer_shift * outer_shift, 0, 2 * outer_shift, 0, 1]
    lin = [-4 * r * a * a, 8 * r * a, -4 * r]
    return tuple(s + (lin[i] if i < 3 else 0) for i, s in enumerate(sq))


def test_closed_form_theta4_examples():
    assert closed_form_theta4(17).coeffs == _expand(-17, 17, 1)
    assert closed_form_theta4(13).coeffs == _expand(39, 13, -3)
    assert closed_form_theta4(5).coeffs == _expand(15, 5, 1)
    with pytest.raises(InvalidConductor):
        closed_form_theta4(13, QuadraticPartition(13, 3, 2))


def test_link_examples():
    theta = link_psi_theta(IntegerPolynomial((-1, 1, 1)), 2, "psi->theta")
    assert theta.coeffs == (-5, 0, 1)
    psi7 = period_polynomial(7, 2)
    assert link_psi_theta(link_psi_theta(psi7, 2, "psi->theta"), 2, "theta->psi") == psi7
    assert link_psi_theta(period_polynomial(13, 4), 4, "psi->theta") == closed_form_theta4(13)


def test_link_non_integer():
    with pytest.raises(NonIntegerResult):
        link_psi_theta(IntegerPolynomial((1, 0, 1)), 2, "theta->psi")


def test_coperiods():
    eta = gauss_periods(period_spec(5, 2))
    g0 = coperiod_from_period(eta[0], 2)
    want = CyclotomicInteger.constant(5, 1) + CyclotomicInteger.zeta_power(5, 1) * 2 + CyclotomicInteger.zeta_power(5, 4) * 2
    assert g0 == want
    total = g0 + coperiod_from_period(eta[1], 2)
    assert total.is_constant() and total.constant_value() == 0
    assert coperiod_from_period(CyclotomicInteger.constant(7, 0), 3) == CyclotomicInteger.constant(7, 1)


@pytest.mark.parametrize("r,d", [(5, 2), (13, 4), (17, 4), (7, 3)])
def test_coperiod_polynomial_is_linked_period_polynomial(r, d):
    assert coperiod_polynomial(r, d) == link_psi_theta(period_polynomial(r, d), d, "psi->theta")


# -- factor degrees: brute-force oracle


def _monic_irreducibles(q, k):
    for tail in itertools.product(range(q), repeat=k):
        f = list(tail) + [1]
        if all(
            poly_mod(f, list(t) + [1], q) != []
            for j in range(1, k // 2 + 1)
            for t in itertools.product(range(q), repeat=j)
        ):
            yield f


def brute_factor_degrees(poly, q):
    from qnrforge.ffcore import poly_divmod

    f = poly_normalize(poly.coeffs, q)
    degrees = []
    for k in range(1, len(f)):
        for g in _monic_irreducibles(q, k):
            while len(f) > 1:
                quo, rem = poly_divmod(f, g, q)
                if rem:
                    break
                degrees.append(k)
                f = quo
    return sorted(degrees)


@pytest.mark.parametrize("r,q,d", [(5, 19, 2), (5, 7, 2), (3, 7, 2), (13, 3, 4), (13, 5, 4), (17, 2, 4), (11, 3, 2), (7, 2, 2)])
def test_factor_degrees_match_brute_force(r, q, d):
    spec = period_spec(r, d)
    res = factor_degree_check(r, q, spec)
    assert list(res.degrees) == brute_factor_degrees(period_polynomial(r, d), q)
    assert res.passed


def test_factor_degree_examples():
    assert factor_degree_check(5, 19, period_spec(5, 2)).predicted == 1
    res = factor_degree_check(5, 7, period_spec(5, 2))
    assert res.predicted == 2 and res.degrees == (2,)
    res = factor_degree_check(3, 7, period_spec(3, 2))
    assert res.predicted == 1 and res.degrees == (1, 1)


def test_factor_degree_errors():
    with pytest.raises(InvalidConductor):
        factor_degree_check(5, 5, period_spec(5, 2))
    with pytest.raises(DeskScaleExceeded):
        factor_degree_check(5, 101, period_spec(5, 2))
    with pytest.raises(DeskScaleExceeded):
        factor_degree_check(37, 3, period_spec(37, 12))


def test_is_prime_helper_sanity():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
