import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from bundlecover.exact_algebra import (
    FiniteGroupTable,
    Perm,
    fixed_subspace,
    left_regular_representation,
    matmul,
    nullspace,
    orbits,
    parse_cycles,
    perm_cycles,
    random_commuting,
    rational_rank,
    rref,
    smith_decomposition,
    smith_normal_form,
    solve_linear,
)

int_matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


# -- permutations -------------------------------------------------------------

def test_cycles_of_square():
    p = Perm.from_cycles("(1 2 3 4)", 4)
    assert perm_cycles(p * p) == [[1, 3], [2, 4]]
    assert p.order() == 4 and perm_cycles(p) == [[1, 2, 3, 4]]


def test_identity_has_fixed_point_cycles():
    assert perm_cycles(Perm.identity(3)) == [[1], [2], [3]]


def test_product_applies_left_factor_first():
    a = Perm.from_cycles("(1 2)", 3)
    b = Perm.from_cycles("(2 3)", 3)
    assert (a * b)(1) == b(a(1)) == 3


def test_cycle_notation_round_trip():
    p = Perm.from_cycles("(1 5 2)(3 4)", 6)
    assert Perm.from_cycles(str(p), 6) == p
    assert str(Perm.identity(4)) == "()"
    assert parse_cycles("(1,2)(3 4)") == [[1, 2], [3, 4]]


@pytest.mark.parametrize("bad", ["(1 2", "(1 a)", "(1 2)(2 3)", "(0 1)"])
def test_malformed_cycles_rejected(bad):
    with pytest.raises(ValueError):
        Perm.from_cycles(bad, 4)


def test_orbits():
    p = Perm.from_cycles("(1 2)(3 4)", 5)
    assert orbits([p], 5) == [[1, 2], [3, 4], [5]]


@given(st.integers(1, 9), st.integers(0, 10**6))
def test_random_commuting_commutes(d, seed):
    rng = random.Random(seed)
    p = Perm.random(d, rng)
    assert p.commutes_with(random_commuting(p, rng))


# -- group tables -------------------------------------------------------------

def test_regular_rep_of_z4_generator():
    G = FiniteGroupTable.cyclic(4)
    p = left_regular_representation(G, 1)
    assert len(p.cycles()) == 1 and p.order() == 4


def test_regular_rep_of_identity():
    G = FiniteGroupTable.cyclic(5)
    assert left_regular_representation(G, G.identity).is_identity()


def test_regular_rep_order_three_in_z6():
    G = FiniteGroupTable.cyclic(6)
    p = left_regular_representation(G, 2)
    assert sorted(map(len, p.cycles())) == [3, 3]


@given(st.integers(1, 12))
def test_regular_rep_cycle_count_times_order(n):
    G = FiniteGroupTable.cyclic(n)
    for g in range(len(G)):
        p = left_regular_representation(G, g)
        assert len(p.cycles()) * p.order() == len(G)
        assert p.order() == G.order_of(g)


def test_generated_by_cap():
    gens = [Perm.from_cycles("(1 2 3 4 5 6 7)", 7), Perm.from_cycles("(1 2)", 7)]
    with pytest.raises(OverflowError):
        FiniteGroupTable.generated_by(gens, lambda a, b: a * b, Perm.identity(7), cap=100)


# -- linear algebra -----------------------------------------------------------

@pytest.mark.parametrize("M, diag, rank", [
    ([[2, 0], [0, 3]], [1, 6], 2),
    ([[0, 0], [0, 0]], [0, 0], 0),
    ([[1, 0], [0, 0]], [1, 0], 1),
])
def test_smith_examples(M, diag, rank):
    assert smith_normal_form(M) == (diag, rank)


@given(int_matrices)
def test_smith_against_sympy(M):
    diag, rank = smith_normal_form(M)
    S = sympy_snf(sympy.Matrix(M), domain=sympy.ZZ)
    theirs = [abs(S[i, i]) for i in range(min(S.shape))]
    assert sorted(diag) == sorted(theirs)
    assert rank == sympy.Matrix(M).rank()


@given(int_matrices)
def test_smith_witnesses_reproduce(M):
    U, D, V = smith_decomposition(M)
    assert matmul(matmul(U, M), V) == D
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)


@given(int_matrices)
def test_rank_and_nullspace_against_sympy(M):
    assert rational_rank(M) == sympy.Matrix(M).rank()
    ns = nullspace(M)
    assert len(ns) == len(M[0]) - sympy.Matrix(M).rank()
    for v in ns:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in M)


@given(int_matrices)
def test_rref_matches_sympy(M):
    R, piv = rref(M)
    S, spiv = sympy.Matrix(M).rref()
    assert tuple(piv) == spiv
    for i in range(len(piv)):
        assert [Fraction(x) for x in R[i]] == [Fraction(int(x.p), int(x.q)) for x in S.row(i)]


@pytest.mark.parametrize("A, dim", [
    ([[1, 0], [0, 1]], 2),
    ([[2, 1], [1, 1]], 0),
    ([[1, 1], [0, 1]], 1),
])
def test_fixed_subspace_examples(A, dim):
    assert len(fixed_subspace(A)) == dim


def test_transvection_fixes_its_axis():
    (v,) = fixed_subspace([[1, 1], [0, 1]])
    assert v[1] == 0 and v[0] != 0


@given(st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n),
                       min_size=n, max_size=n)))
def test_fixed_dim_is_degree_minus_rank(A):
    n = len(A)
    shifted = sympy.Matrix(A) - sympy.eye(n)
    assert len(fixed_subspace(A)) == n - shifted.rank()


def test_solve_linear():
    assert solve_linear([[1, 1], [1, -1]], [2, 0]) == [1, 1]
    assert solve_linear([[1, 1], [1, 1]], [1, 2]) is None
