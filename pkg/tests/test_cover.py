import json
import random

import pytest
from hypothesis import given, strategies as st

from bundlecover.cover import (
    MANIFOLD,
    CoverLoop,
    FillError,
    NoLiftingPower,
    boundary_lifts,
    build_cover,
    canonical_twist_lift,
    canonical_twist_x_lift,
    check_lift_conditions,
    cover_from_dict,
    deck_transformations,
    fiber_product,
    find_lifts,
    grid_cover,
    grid_sheet,
    intersection_number,
    minimal_lifting_power,
    orbifold_fill,
    projection,
    punctured_torus,
    to_dot,
    trivial_cover,
    verify_lift,
)
from bundlecover.exact_algebra import Perm, random_transitive
from bundlecover.fpgroup import FreeWord, parse_twist_word, torus_names, twist_word_aut, twist_x
from bundlecover.pipeline import case1_cover, multik_covers

T = punctured_torus(1)
S4 = Perm.from_cycles("(1 2 3 4)", 4)
twist_words = st.lists(st.tuples(st.sampled_from(["Dx", "Dy"]), st.sampled_from([-1, 1])),
                       min_size=1, max_size=6)


def random_cover(seed, max_degree=8, k=1):
    rng = random.Random(seed)
    base = punctured_torus(k)
    d = rng.randint(1, max_degree)
    return build_cover(base, random_transitive(d, base.rank, rng))


def test_base_surfaces():
    assert (T.genus, T.punctures, T.euler_characteristic) == (1, 1, -1)
    T3 = punctured_torus(3)
    assert (T3.genus, T3.punctures, T3.euler_characteristic) == (1, 3, -3)


def test_trivial_cover_is_base():
    c = trivial_cover(T)
    assert (c.degree, c.genus, c.punctures) == (1, 1, 1)


def test_degree_two_cover_with_commuting_monodromy():
    p = Perm.from_cycles("(1 2)", 2)
    c = build_cover(T, [p, p])
    assert (c.degree, c.euler_characteristic, c.punctures, c.genus) == (2, -2, 2, 1)


def test_non_transitive_rejected():
    with pytest.raises(ValueError, match="transitive"):
        build_cover(T, [Perm.identity(2), Perm.identity(2)])


def test_figure_cover():
    c = case1_cover()
    assert c.degree == 16 and c.genus == 5 and c.euler_characteristic == -16
    assert [p.degree for p in boundary_lifts(c)] == [2] * 8
    assert orbifold_fill(c, 2) == MANIFOLD


def test_standard_abelian_grid_cover():
    c = grid_cover(4, [S4] * 4)
    assert c.punctures == 16 and all(p.degree == 1 for p in c.puncture_lifts)
    assert orbifold_fill(c, 2) == [2] * 16


def test_trivial_cover_keeps_cone_point():
    assert orbifold_fill(trivial_cover(T), 2) == [2]


def test_fill_failure():
    c = build_cover(T, [Perm.from_cycles("(1 2 3)", 3), Perm.from_cycles("(1 2)", 3)])
    with pytest.raises(FillError):
        orbifold_fill(c, 2)


def test_lift_conditions_examples():
    assert check_lift_conditions([S4, S4.inverse(), S4, S4.inverse()], 2) == {
        "lemma_lift": True, "condition_I": True, "condition_II": True, "n": 2}
    ident = [Perm.identity(3)] * 4
    res = check_lift_conditions(ident, 5)
    assert res["lemma_lift"] and res["condition_II"]
    bad = [Perm.from_cycles("(1 2)", 3), Perm.from_cycles("(1 3)", 3),
           Perm.identity(3), Perm.identity(3)]
    assert not check_lift_conditions(bad)["lemma_lift"]


@given(st.integers(0, 10**6))
def test_condition_two_iff_unwrapping_divides_two(seed):
    rng = random.Random(seed)
    r = rng.randint(1, 5)
    while True:
        sig = [Perm.random(r, rng) for _ in range(4)]
        try:
            c = grid_cover(r, sig)
            break
        except ValueError:
            continue
    cond = check_lift_conditions(sig, 2)["condition_II"]
    assert cond == all(p.degree <= 2 for p in c.puncture_lifts)


@given(st.integers(0, 10**6), st.integers(1, 3))
def test_euler_characteristic_accounting(seed, k):
    c = random_cover(seed, 7, k)
    base = c.base
    V, E = c.degree, c.degree * base.rank
    assert V - E == c.degree * (1 - base.rank) == c.euler_characteristic
    assert 2 - 2 * c.genus - c.punctures == c.degree * base.euler_characteristic
    # punctures over each base boundary partition the sheets
    for j in range(base.punctures):
        assert sum(p.degree for p in c.puncture_lifts if p.base_index == j) == c.degree


def test_degree_one_cover_lifts_everything():
    f = twist_word_aut("Dx Dy^-3 Dx")
    m, lifts = minimal_lifting_power(trivial_cover(T), f)
    assert m == 1 and lifts == [Perm.identity(1)]


def test_case1_twist_lifts():
    c = case1_cover()
    lifts = find_lifts(c, twist_x())
    canon = canonical_twist_x_lift(c)
    assert canon in lifts
    for i in (2, 4):
        assert all(canon(grid_sheet(i, j, 4)) == grid_sheet(i, j, 4) for j in range(1, 5))
    assert find_lifts(c, twist_word_aut("Dy^4"))
    assert not find_lifts(c, twist_word_aut("Dy"))


@given(twist_words)
def test_canonical_lift_of_twist_subgroup(word):
    c = case1_cover()
    word = [(g, 4 * k if g == "Dy" else k) for g, k in word]
    f = twist_word_aut(word)
    assert verify_lift(c, f, canonical_twist_lift(c, word))


@given(st.integers(0, 10**6), twist_words)
def test_lifts_are_sound_and_deck_invariant(seed, word):
    c = random_cover(seed, 6)
    f = twist_word_aut(word)
    try:
        m, lifts = minimal_lifting_power(c, f, 64)
    except NoLiftingPower:
        return
    decks = deck_transformations(c)
    for lam in lifts:
        assert verify_lift(c, f, lam, power=m)
        # lifts form a torsor for the deck group
        assert {d * lam for d in decks} == set(lifts)


def test_fiber_product_with_itself_and_trivial():
    c = case1_cover()
    assert fiber_product(c, c).degree == c.degree
    assert fiber_product(c, trivial_cover(T)).degree == c.degree


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_fiber_product_projections_are_cover_maps(s1, s2):
    a, b = random_cover(s1, 5), random_cover(s2, 5)
    prod = fiber_product(a, b)
    for i, fac in enumerate((a, b)):
        proj = projection(prod, i)
        assert set(proj) == set(range(1, fac.degree + 1))
        for g in range(2):
            for t in range(1, prod.degree + 1):
                assert proj[prod.perms[g](t) - 1] == fac.perms[g](proj[t - 1])


def test_multipuncture_product_unwraps_twice():
    _, factors, prod = multik_covers(2)
    degs = [sorted({p.degree for p in f.puncture_lifts if p.base_index == 0}) for f in factors]
    assert degs == [[2], [1]]
    assert {p.degree for p in prod.puncture_lifts} == {2}
    assert orbifold_fill(prod, 2) == MANIFOLD


def test_base_intersection_of_x_and_y():
    c = trivial_cover(T)
    x = CoverLoop.from_word(c, FreeWord.parse("x", c.base.names), 1)
    y = CoverLoop.from_word(c, FreeWord.parse("y", c.base.names), 1)
    assert intersection_number(c, x, y) == 1
    assert intersection_number(c, y, x) == -1
    assert intersection_number(c, x, x) == 0


def test_descriptor_and_dot():
    c = case1_cover()
    d = json.loads(c.to_json())
    assert set(d) >= {"base", "degree", "perms", "punctures"}
    assert set(d["punctures"][0]) >= {"word", "cycle", "degree"}
    assert cover_from_dict(d).perms == c.perms
    dot = to_dot(c)
    assert dot.startswith("digraph") and dot.count("[label=") == 16 + 32


def test_descriptor_for_multipunctured_base():
    _, _, prod = multik_covers(2)
    again = cover_from_dict(prod.to_dict())
    assert again.perms == prod.perms and again.base.names == torus_names(2)


def test_parse_twist_word():
    assert parse_twist_word("Dx Dy^4 Dx^-1") == [("Dx", 1), ("Dy", 4), ("Dx", -1)]
    with pytest.raises(ValueError):
        parse_twist_word("Dz")
