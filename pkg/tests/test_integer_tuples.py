from itertools import combinations
from math import isqrt

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dtlab.integer_tuples import (IntegerTupleQuery, check_property, compatibility_graph, difference_of_squares,
                                  embedding_violations, is_kth_power, search_max_tuple,
                                  strong_divisor_bound_check)
from dtlab.numtheory import divisors, primes_upto


def test_kth_power_examples():
    assert is_kth_power(16, 4)
    assert is_kth_power(0, 5)
    assert not is_kth_power(2**63 - 1, 2)
    assert is_kth_power((2**31 - 1) ** 2, 2)
    assert not is_kth_power(-4, 2)


@given(st.integers(0, 10**6), st.integers(2, 9))
def test_kth_power_of_roots(x, k):
    assert is_kth_power(x**k, k)
    if x > 1:
        assert not is_kth_power(x**k + 1, k)


def test_check_property_examples():
    assert check_property([1, 3, 8, 120], 2, 1).holds
    bad = check_property([1, 2], 2, 1)
    assert not bad.holds and bad.violating_pair == (1, 2)
    assert not check_property([1, 3], 2, 1, strong=True).holds
    with pytest.raises(ValueError):
        check_property([1, 1], 2, 1)


def test_query_validation():
    for args in ((2, 0, 10), (1, 1, 10), (65, 1, 10), (2, 1, 0), (2, 1, 10**7 + 1)):
        with pytest.raises(ValueError):
            IntegerTupleQuery(*args)


def test_fermat_quadruple_is_maximum():
    res = search_max_tuple(IntegerTupleQuery(2, 1, 120))
    assert res.size == 4
    assert res.witness == [1, 3, 8, 120]


def test_cubes_bounded():
    res = search_max_tuple(IntegerTupleQuery(3, 1, 1000))
    assert res.size <= 7 and res.size == 2
    assert check_property(res.witness, 3, 1).holds


def brute_max(k, n, N, strong):
    allowed = [a for a in range(1, N + 1) if not strong or is_kth_power(a * a + n, k)]
    best = []
    for size in range(1, len(allowed) + 1):
        hit = next((list(c) for c in combinations(allowed, size) if check_property(c, k, n, strong).holds), None)
        if hit is None:
            break
        best = hit
    return best


@pytest.mark.parametrize("k,n,N", [(2, 1, 30), (2, 2, 30), (2, 3, 25), (3, 1, 30), (2, 8, 25), (4, 1, 20)])
def test_search_matches_brute_force(k, n, N):
    for strong in (False, True):
        res = search_max_tuple(IntegerTupleQuery(k, n, N, strong))
        want = brute_max(k, n, N, strong)
        assert res.size == len(want)
        assert res.witness == want


def test_edges_match_definition():
    rng = np.random.default_rng(17)
    for _ in range(15):
        k = int(rng.integers(2, 5))
        n = int(rng.integers(1, 50))
        N = int(rng.integers(2, 200))
        g = compatibility_graph(IntegerTupleQuery(k, n, N))
        want = [(a, b) for a in range(1, N + 1) for b in range(a + 1, N + 1) if is_kth_power(a * b + n, k)]
        assert sorted(g.edges) == want


def test_monotone_in_ceiling():
    sizes = [search_max_tuple(IntegerTupleQuery(2, 1, N)).size for N in (2, 5, 10, 50, 120, 400)]
    assert sizes == sorted(sizes)


def test_difference_of_squares():
    assert difference_of_squares(15) == [(1, 4), (7, 8)]
    for n in range(1, 300):
        sols = difference_of_squares(n)
        want = [(x, isqrt(x * x + n)) for x in range(1, n) if is_kth_power(x * x + n, 2)]
        assert sols == want


def test_divisor_bound_small_n():
    for n in range(1, 201):
        check = strong_divisor_bound_check(n)
        assert check.holds, n
        assert check.tau == len(divisors(n))


def test_divisor_bound_examples():
    c = strong_divisor_bound_check(15)
    assert c.solutions == [(1, 4), (7, 8)] and c.tau == 4 and c.searched_max == 1
    for p in (3, 13, 97):
        assert len(strong_divisor_bound_check(p).solutions) <= 2
    assert strong_divisor_bound_check(24, N=10**5).holds
    with pytest.raises(ValueError):
        strong_divisor_bound_check(15, k=3)


def test_embedding_into_field_graph():
    for p in primes_upto(97):
        for k in (2, 3, 4, 6):
            for n in range(1, p):
                assert embedding_violations(p, k, n) == []
    with pytest.raises(ValueError):
        embedding_violations(15, 2, 1)
