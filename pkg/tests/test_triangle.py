import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bundlecover.cover import MANIFOLD, boundary_lifts, orbifold_fill
from bundlecover.exact_algebra import FiniteGroupTable, Perm, left_regular_representation
from bundlecover.pipeline import case1_cover
from bundlecover.triangle import (
    QuotientCertificate,
    SearchExhausted,
    case2_certificates,
    case2_cover,
    cut_permutations,
    find_triangle_quotient,
)


@pytest.fixture(scope="module")
def cert3():
    return find_triangle_quotient(3, seed=0, min_order=7)


def test_n2_is_cyclic_of_order_four():
    c = find_triangle_quotient(2)
    assert c.order == 4
    assert c.a == c.b
    assert c.verified_orders() == (4, 4, 2)
    assert c.verify()


def test_n_below_two_rejected():
    with pytest.raises(ValueError):
        find_triangle_quotient(1)


def test_regular_rep_of_four_cycle_product():
    G = FiniteGroupTable.cyclic(4)
    a = left_regular_representation(G, 1)
    assert a == Perm.from_cycles("(1 2 3 4)", 4)
    prod = a * a
    assert prod == Perm.from_cycles("(1 3)(2 4)", 4)
    assert prod.order() == 2


def test_n3_certificate_orders(cert3):
    assert cert3.verified_orders() == (6, 6, 3)
    assert cert3.verify()
    assert cert3.order >= 7


def test_n3_orders_rechecked_by_powering(cert3):
    G = cert3.group
    ab = G.multiply(cert3.a, cert3.b)
    for x, k in ((cert3.a, 6), (cert3.b, 6), (ab, 3)):
        y = G.identity
        powers = []
        for _ in range(k):
            y = G.multiply(y, x)
            powers.append(y)
        assert powers[-1] == G.identity
        assert G.identity not in powers[:-1]


def test_certificate_json_fields(cert3):
    d = json.loads(cert3.to_json())
    assert d["verified_orders"] == [6, 6, 3]
    assert d["group_order"] == cert3.order
    assert d["source"] in ("SL(2,p)", "GL(2,p)") or d["source"].startswith("S_")


def test_search_is_seed_deterministic():
    a = find_triangle_quotient(3, seed=7, min_order=7)
    b = find_triangle_quotient(3, seed=7, min_order=7)
    assert a.to_json() == b.to_json()


def test_exhausted_budget_reports_primes():
    with pytest.raises(SearchExhausted):
        find_triangle_quotient(5, budget=1, max_prime=3, cap=2)


def test_case2_certificates_n2():
    d = case2_certificates(find_triangle_quotient(2))
    assert d["cycle_counts"] == (1, 1, 2)
    assert d["genus_row2"] == 1
    assert d["dim_bound"] == 2
    # the two formulas agree at n = 2
    assert d["dim_bound"] == 2 * d["genus_row2"]


def test_case2_cover_n2_is_case1_cover():
    c = case2_cover(find_triangle_quotient(2))
    ref = case1_cover()
    assert c.degree == 16
    assert c.perms == ref.perms
    assert all(p.degree == 2 for p in boundary_lifts(c))
    assert orbifold_fill(c, 2) == MANIFOLD


def test_case2_n3_cover(cert3):
    c = case2_cover(cert3)
    assert c.degree == 4 * cert3.order
    assert all(3 % p.degree == 0 for p in boundary_lifts(c))
    orbifold_fill(c, 3)


def test_case2_n3_cycle_counts(cert3):
    d = case2_certificates(cert3)
    N = cert3.order
    assert d["cycle_counts"] == (N // 6, N // 6, N // 3)
    assert d["dim_bound"] == 2 + Fraction(N, 3)


def test_cycle_count_times_order_is_group_order(cert3):
    G = cert3.group
    for x in (cert3.a, cert3.b, G.multiply(cert3.a, cert3.b)):
        p = left_regular_representation(G, x)
        assert len(p.cycles()) * G.order_of(x) == len(G)


def test_cut_permutations_pair_inverses(cert3):
    s1, s2, s3, s4 = cut_permutations(cert3)
    assert s1 * s2 == Perm.identity(cert3.order)
    assert s3 * s4 == Perm.identity(cert3.order)


@settings(max_examples=20)
@given(st.integers(0, 10_000))
def test_any_seed_gives_verified_n3_quotient(seed):
    c = find_triangle_quotient(3, seed=seed, budget=2000, cap=2000)
    assert isinstance(c, QuotientCertificate)
    assert c.verified_orders() == (6, 6, 3)
    assert c.verify()
