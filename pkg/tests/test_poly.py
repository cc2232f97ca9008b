import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtlab import poly
from dtlab.charsum import root_structure
from dtlab.finite_field import build_field
from dtlab.stepanov import binom_nonzero_mod_p, first_carry
from oracles import stepanov_reference_binom


def random_poly(rng, F, deg):
    f = [int(x) for x in rng.integers(0, F.q, size=deg + 1)]
    f[-1] = int(rng.integers(1, F.q))
    return f


def test_hyper_derivative_of_linear_power():
    F = build_field(7)
    a, c, d, n = 3, 2, 5, 2
    lhs = poly.hyper_derivative(F, poly.linear_power(F, a, c, d), n)
    coef = F.mul(F.pow(a, n), F.from_int(10))  # C(5, 2) = 10
    rhs = poly.scale(F, poly.linear_power(F, a, c, d - n), coef)
    assert lhs == rhs
    f = [1, 2, 3]
    assert poly.hyper_derivative(F, f, 0) == f


@pytest.mark.parametrize("p,r", [(13, 1), (3, 2), (2, 3)])
def test_leibniz_rule(p, r):
    F = build_field(p, r)
    rng = np.random.default_rng(11)
    for _ in range(20):
        f = random_poly(rng, F, int(rng.integers(0, 9)))
        g = random_poly(rng, F, int(rng.integers(0, 9)))
        n = int(rng.integers(0, 6))
        lhs = poly.hyper_derivative(F, poly.mul(F, f, g), n)
        rhs = []
        for k in range(n + 1):
            rhs = poly.add(F, rhs, poly.mul(F, poly.hyper_derivative(F, f, k), poly.hyper_derivative(F, g, n - k)))
        assert lhs == rhs


def test_vanishing_hyper_derivatives_give_a_multiple_root():
    rng = np.random.default_rng(5)
    for trial in range(100):
        p, r = [(5, 1), (7, 1), (3, 2), (2, 3), (13, 1)][trial % 5]
        F = build_field(p, r)
        c = int(rng.integers(0, F.q))
        m = int(rng.integers(0, 5))
        g = random_poly(rng, F, int(rng.integers(0, 6)))
        f = poly.mul(F, poly.power(F, [F.neg(c), 1], m), g)
        order = 0
        while order <= poly.degree(f) and poly.evaluate(F, poly.hyper_derivative(F, f, order), c) == 0:
            order += 1
        assert order >= m
        quotient, rem = poly.divmod_poly(F, f, poly.power(F, [F.neg(c), 1], order))
        assert rem == []
        if order > m:
            assert poly.evaluate(F, g, c) == 0


def test_kummer_carry_matches_binomials():
    for p in (2, 3, 5, 7):
        for m in range(201):
            for n in range(201):
                assert binom_nonzero_mod_p(m, n, p) == (stepanov_reference_binom(m, n, p) != 0)
                assert poly.binom_mod_p(m + n, n, p) == stepanov_reference_binom(m, n, p)


def test_kummer_small_cases():
    assert binom_nonzero_mod_p(17, 0, 3)
    assert not binom_nonzero_mod_p(1, 1, 2)
    assert first_carry(1, 1, 2) == 0
    assert first_carry(3, 4, 10) is None


def test_divmod_and_gcd():
    F = build_field(11)
    rng = np.random.default_rng(3)
    for _ in range(30):
        f = random_poly(rng, F, 7)
        g = random_poly(rng, F, 3)
        q, r = poly.divmod_poly(F, f, g)
        assert poly.add(F, poly.mul(F, q, g), r) == f
        assert poly.degree(r) < poly.degree(g)
        h = random_poly(rng, F, 2)
        common = poly.gcd(F, poly.mul(F, f, h), poly.mul(F, g, h))
        assert poly.divmod_poly(F, common, poly.monic(F, h))[1] == []


def test_evaluate_all_matches_pointwise():
    F = build_field(3, 2)
    f = [1, 5, 0, 7]
    assert poly.evaluate_all(F, f).tolist() == [poly.evaluate(F, f, x) for x in range(F.q)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(5, 1), (7, 1), (3, 2), (2, 2), (5, 2)]),
       st.lists(st.tuples(st.integers(0, 10**6), st.integers(1, 6)), min_size=1, max_size=4),
       st.integers(1, 4))
def test_squarefree_decomposition_of_split_polynomials(pr, roots, d):
    F = build_field(*pr)
    mult = {}
    for x, m in roots:
        mult[x % F.q] = mult.get(x % F.q, 0) + m
    f = [1]
    for x, m in mult.items():
        f = poly.mul(F, f, poly.power(F, [F.neg(x), 1], m))
    parts = poly.squarefree_decomposition(F, f)
    rebuilt = [1]
    for k, g in parts.items():
        rebuilt = poly.mul(F, rebuilt, poly.power(F, g, k))
    assert rebuilt == f
    if (F.q - 1) % d == 0:
        distinct, is_power = root_structure(F, f, d)
        assert distinct == len(mult)
        assert is_power == all(m % d == 0 for m in mult.values())


def test_root_structure_counts_roots_outside_the_field():
    F = build_field(7)
    # x^2 + 1 has no root in F_7 (7 = 3 mod 4) but two in F_49
    g = poly.mul(F, poly.power(F, [1, 0, 1], 2), [0, 1])
    assert root_structure(F, g, 2) == (3, False)
    assert root_structure(F, poly.power(F, [1, 0, 1], 2), 2) == (2, True)
