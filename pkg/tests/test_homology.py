import random

import pytest
import sympy
from hypothesis import given, strategies as st

from bundlecover.cover import (
    CoverLoop,
    NoLiftingPower,
    build_cover,
    canonical_twist_x_lift,
    deck_transformations,
    find_lifts,
    grid_sheet,
    minimal_lifting_power,
    punctured_torus,
    trivial_cover,
)
from bundlecover.exact_algebra import Perm, determinant, nullspace, random_transitive
from bundlecover.fpgroup import FreeAut, twist_word_aut, twist_x
from bundlecover.homology import (
    H1Basis,
    NotALift,
    betti_mapping_torus,
    betti_oracle,
    fixed_pair_search,
    generator_components,
    gram,
    h1_action,
    hnn_presentation,
)
from bundlecover.pipeline import case1_cover, pullback_class

T = punctured_torus(1)
twist_words = st.lists(st.tuples(st.sampled_from(["Dx", "Dy"]), st.sampled_from([-1, 1])),
                       min_size=1, max_size=6)


def random_cover(seed, max_degree=7):
    rng = random.Random(seed)
    d = rng.randint(1, max_degree)
    return build_cover(T, random_transitive(d, 2, rng))


@given(st.integers(0, 10**6))
def test_basis_dimensions_and_form(seed):
    c = random_cover(seed)
    b = H1Basis(c)
    assert b.dim == c.degree * (c.rank - 1) + 1
    q = b.quotient
    assert q.dim == 2 * c.genus
    J = b.intersection_matrix
    assert all(J[i][j] == -J[j][i] for i in range(b.dim) for j in range(b.dim))
    assert sympy.Matrix(J).rank() == 2 * c.genus
    if q.dim:
        assert abs(determinant(q.form)) == 1


def test_boundary_loops_are_in_the_radical():
    c = case1_cover()
    b = H1Basis(c)
    for v in b.boundary_vectors:
        assert all(b.intersect(v, b.coords(b.chains[j])) == 0 for j in range(b.dim))


def test_identity_acts_as_identity():
    c = case1_cover()
    a = h1_action(c, FreeAut.identity(c.base.names), Perm.identity(c.degree))
    n = len(a.matrix)
    assert a.matrix == [[int(i == j) for j in range(n)] for i in range(n)]
    assert a.fixed_dim == 10


def test_canonical_twist_lift_fixes_rows_two_and_four():
    c = case1_cover()
    b = H1Basis(c)
    a = h1_action(c, twist_x(), canonical_twist_x_lift(c), basis=b)
    fixed_rows = 0
    for loop in generator_components(c, 0):
        row = next(i for i in range(1, 5) if loop.steps[0][0] in
                   [grid_sheet(i, j, 4) for j in range(1, 5)])
        if row in (2, 4):
            assert a.fixes(b.coords(loop))
            fixed_rows += 1
    assert fixed_rows == 2


def test_wrong_sheet_map_rejected():
    c = case1_cover()
    bad = Perm.from_cycles("(1 2)", 16)
    with pytest.raises(NotALift):
        betti_oracle(c, twist_x(), bad)


@pytest.mark.parametrize("word, b1", [("id", 3), ("Dx Dy^4", 1)])
def test_betti_on_trivial_cover(word, b1):
    c = trivial_cover(T)
    f = twist_word_aut(word)
    lam = Perm.identity(1)
    assert betti_mapping_torus(h1_action(c, f, lam), 2) == b1
    assert betti_oracle(c, f, lam, 2) == b1


@given(st.integers(0, 10**6), twist_words, st.sampled_from([None, 2, 4]))
def test_formula_agrees_with_oracle(seed, word, n):
    c = random_cover(seed, 6)
    f = twist_word_aut(word)
    try:
        m, lifts = minimal_lifting_power(c, f, 64)
    except NoLiftingPower:
        return
    lam = lifts[seed % len(lifts)]
    a = h1_action(c, f, lam, power=m)
    assert a.is_symplectic() and a.preserves_boundary()
    try:
        formula = betti_mapping_torus(a, n)
    except ValueError:
        return  # fill impossible at this cone order
    assert formula == betti_oracle(c, f, lam, n, power=m)
    if m <= 2:
        assert hnn_presentation(c, f, lam, n, power=m).abelianization_rank() == formula


@given(st.integers(0, 10**6), twist_words)
def test_fixed_dim_invariant_under_deck_conjugation(seed, word):
    c = random_cover(seed, 6)
    f = twist_word_aut(word)
    try:
        m, lifts = minimal_lifting_power(c, f, 64)
    except NoLiftingPower:
        return
    lam = lifts[0]
    dims = {h1_action(c, f, d.inverse() * lam * d, power=m).fixed_dim
            for d in deck_transformations(c)}
    assert len(dims) == 1


def test_dy4_lift_fixes_classes_missing_every_y_lift():
    c = case1_cover()
    b = H1Basis(c)
    f = twist_word_aut("Dy^4")
    a = h1_action(c, f, Perm.identity(16), basis=b)
    rows = [b.functional(l) for l in generator_components(c, 1)]
    rng = random.Random(0)
    for v in nullspace(rows, b.dim):
        assert a.fixes(v)
    basis = nullspace(rows, b.dim)
    for _ in range(10):
        coef = [rng.randint(-3, 3) for _ in basis]
        w = [sum(k * v[i] for k, v in zip(coef, basis)) for i in range(b.dim)]
        assert a.fixes(w)


def test_case1_fixed_pair():
    c = case1_cover()
    pair = fixed_pair_search(c)
    assert pair.passes() and pair.intersection == 2
    G = gram(pair.basis, pair.classes)
    assert all(G[i][j] == -G[j][i] for i in range(pair.dim) for j in range(pair.dim))
    # loops realize their classes
    for i in range(pair.dim):
        lp = pair.loop(i)
        assert pair.basis.quotient.project(pair.basis.coords(lp)) == \
            pair.basis.quotient.project(pair.classes[i])


def test_pullback_on_degree_one_covers():
    from bundlecover.cover import pulled_back_cover
    from bundlecover.fpgroup import filling_map
    plus = trivial_cover(T)
    c = pulled_back_cover(punctured_torus(2), plus, filling_map(2, 1))
    loop = CoverLoop.from_word(plus, (1, 2, -1), 1)
    assert pullback_class(plus, loop, c).steps == loop.steps
