import numpy as np
import pytest

from dtlab import poly
from dtlab.decomposition import build_target, find_binary
from dtlab.finite_field import FieldError, build_field
from dtlab.numtheory import primes_upto
from dtlab.stepanov import (PRODUCT, RESTRICTED, HypothesisError, InapplicableError, build_auxiliary_poly,
                            first_carry, moment, moment_exponents, solve_vandermonde_system,
                            verify_restricted, verify_stepanov)
from dtlab.tuple_search import lambda_representatives, md, msd


def test_two_by_two_solve():
    F = build_field(13)
    assert solve_vandermonde_system(F, [3, 4]) == [4, 10]
    assert solve_vandermonde_system(F, [5]) == [1]


@pytest.mark.parametrize("variant", [PRODUCT, RESTRICTED])
def test_moment_residuals_vanish(variant):
    rng = np.random.default_rng(2)
    for p, r in [(13, 1), (31, 1), (5, 2), (2, 5)]:
        F = build_field(p, r)
        for _ in range(10):
            n = int(rng.integers(1, 4)) * 2
            A = [int(a) for a in rng.choice(np.arange(1, F.q), size=min(n, F.q - 1), replace=False)]
            if len(A) % 2 and variant == RESTRICTED:
                A = A[:-1]
            c = solve_vandermonde_system(F, A, variant)
            exps, rhs = moment_exponents(len(A), variant)
            assert [moment(F, c, A, j) for j in exps] == rhs


def test_solver_rejects_bad_sets():
    F = build_field(7)
    with pytest.raises(FieldError):
        solve_vandermonde_system(F, [1, 1])
    with pytest.raises(FieldError):
        solve_vandermonde_system(F, [0, 2])
    with pytest.raises(FieldError):
        solve_vandermonde_system(F, [1, 2, 3], RESTRICTED)


def test_auxiliary_polynomial_example():
    F = build_field(13)
    f = build_auxiliary_poly(F, [3, 4], 1, 2)
    assert f and poly.degree(f) <= 1 + 6
    assert poly.evaluate(F, f, 0) == 0  # 1 is a square


def test_binomial_condition_is_automatic_for_prime_fields():
    for p in primes_upto(100):
        for d in range(2, p):
            if (p - 1) % d:
                continue
            e = (p - 1) // d
            for n in range(1, p - e + 1):
                assert first_carry(e - 1, n, p) is None


def test_inapplicable_error_carries_the_carry_position():
    F = build_field(3, 2)
    # e = 4 = (11)_3; adding n = 3 = (10)_3 to e - 1 = 3 = (10)_3 is carry free,
    # but n = 6 = (20)_3 carries in the second digit.
    with pytest.raises(InapplicableError) as info:
        build_auxiliary_poly(F, [1, 2, 3, 4, 5, 6], 1, 2)
    assert info.value.carry_position == 1


def test_certificate_for_strong_witness():
    F = build_field(13)
    cert = verify_stepanov(F, [3, 4], [3, 4], 1, 2)
    assert cert.c == [4, 10]
    assert cert.lambda_is_dth_power
    assert cert.intersection_size == 2  # 3 * 4 = -1, so both lie in -A^{-1}
    assert cert.implied_bound == 6 + 2 - 1
    assert cert.bound_holds
    assert sum(cert.multiplicities.values()) <= cert.degree <= cert.degree_cap
    assert cert.multiplicities[0] == 2


def test_degenerate_single_element():
    F = build_field(11)
    cert = verify_stepanov(F, [2], [2], 1, 2)
    assert cert.bound_holds and cert.n == 1


def test_empty_sets_are_rejected():
    with pytest.raises(FieldError):
        verify_stepanov(build_field(7), [], [1], 1, 2)


def test_hypothesis_violation_reports_pair():
    F = build_field(13)
    with pytest.raises(HypothesisError) as info:
        verify_stepanov(F, [1, 2], [1, 2], 1, 2)
    assert info.value.pair == (1, 1)


def test_decomposition_pairs_satisfy_the_product_bound():
    checked = 0
    for p in primes_upto(50):
        F = build_field(p)
        for d in range(2, p):
            if (p - 1) % d:
                continue
            for lam in lambda_representatives(F, d):
                for A, B in find_binary(build_target(F, d, lam)).pairs:
                    cert = verify_stepanov(F, A, B, lam, d)
                    assert cert.bound_holds
                    checked += 1
    assert checked > 0


def test_strong_witnesses_reproduce_the_sharper_prime_bound():
    for p in primes_upto(60)[2:]:
        F = build_field(p)
        for d in range(2, p):
            if (p - 1) % d:
                continue
            rep = msd(F, d, 1)
            if not rep.witness:
                continue
            cert = verify_stepanov(F, rep.witness, rep.witness, 1, d)
            size, e = len(rep.witness), (p - 1) // d
            assert size * size <= cert.implied_bound
            assert cert.implied_bound <= e + size - 1
            assert (size - 0.5) ** 2 <= e - 0.75 + 1e-12


def test_restricted_certificates_on_non_strong_witnesses():
    checked = 0
    for p, r in [(13, 1), (17, 1), (29, 1), (37, 1), (5, 2), (7, 2)]:
        F = build_field(p, r)
        for d in range(2, F.q):
            if (F.q - 1) % d or (p - 1) % d:
                continue
            for lam in lambda_representatives(F, d):
                rep = md(F, d, lam)
                try:
                    cert = verify_restricted(F, rep.witness, lam, d)
                except HypothesisError:
                    continue
                assert cert.bound_holds
                assert sum(cert.multiplicities.values()) <= max(cert.degree, 0)
                checked += 1
    assert checked > 0
