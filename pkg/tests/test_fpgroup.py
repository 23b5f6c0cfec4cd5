import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bundlecover.exact_algebra import Perm, matmul
from bundlecover.fpgroup import (
    FPGroup,
    FreeAut,
    FreeWord,
    NotAnAutomorphism,
    abelianized_matrix,
    apply_aut,
    compose_auts,
    eliminate_generator,
    filling_map,
    fixes_punctures,
    is_rank2_automorphism,
    kill_generators,
    mapping_torus_presentation,
    parse_aut,
    subgroup_presentation,
    theta,
    torus_boundary_words,
    torus_names,
    twist_word_aut,
    twist_x,
    twist_y,
)

XY = ("x", "y")
twist_words = st.lists(st.tuples(st.sampled_from(["Dx", "Dy"]), st.integers(-3, 3)),
                       max_size=6)


def W(text, names=XY):
    return FreeWord.parse(text, names)


def test_free_reduction_and_inverse():
    w = W("x y Y x X")
    assert str(w) == "x"
    assert (W("x y") * W("x y").inverse()).is_identity()


def test_twists_fix_boundary_word_exactly():
    comm = W("x y X Y")
    assert apply_aut(twist_x(), comm) == comm
    assert apply_aut(twist_y(), comm) == comm


def test_twist_y_on_x():
    assert apply_aut(twist_y(), W("x")) == W("x Y")


def test_identity_aut():
    w = W("x x y X")
    assert apply_aut(FreeAut.identity(XY), w) == w


def test_compose_with_inverse_is_identity():
    assert compose_auts(twist_x(), twist_x().inverse()).is_identity()


@pytest.mark.parametrize("aut, M", [
    (twist_x(), [[1, 1], [0, 1]]),
    (twist_y(), [[1, 0], [-1, 1]]),
    (twist_word_aut("Dy^4"), [[1, 0], [-4, 1]]),
    (twist_word_aut("Dx Dy^4"), [[-3, 1], [-4, 1]]),
])
def test_abelianized_matrices(aut, M):
    assert abelianized_matrix(aut) == M


@given(twist_words, twist_words)
def test_abelianization_is_functorial(u, v):
    a, b = twist_word_aut(u), twist_word_aut(v)
    assert abelianized_matrix(compose_auts(a, b)) == matmul(abelianized_matrix(a),
                                                            abelianized_matrix(b))


@given(twist_words)
def test_inverse_certificate_round_trip(word):
    a = twist_word_aut(word)
    inv = a.inverse()
    for g in range(2):
        gen = FreeWord.generator(XY, g)
        assert a.apply(inv.apply(gen)) == gen
    assert is_rank2_automorphism(list(a.images))


def test_bad_inverse_certificate_rejected():
    with pytest.raises(NotAnAutomorphism):
        FreeAut.from_strings(XY, ["x", "y x"], ["x", "y x"])


def test_conjugating_twist_generators_by_diagonal():
    # gamma = diag(r, 1/r) with r^2 = 2 acts by (a, b; c, d) -> (a, 2b; c/2, d)
    def conj(M):
        (a, b), (c, d) = M
        return [[a, 2 * b], [Fraction(c, 2), d]]
    assert conj([[1, 0], [4, 1]]) == [[1, 0], [2, 1]]
    assert conj([[1, 1], [0, 1]]) == [[1, 2], [0, 1]]


def test_parse_aut_text_format():
    a = parse_aut("x -> x\ny -> y x\ninverse:\nx -> x\ny -> y X")
    assert a == twist_x()
    assert parse_aut(a.to_text()) == a
    with pytest.raises(ValueError):
        parse_aut("x = y")


def test_presentation_text_round_trip():
    G = FPGroup.parse("gens: x y t ; rels: t x T X, t y T Y")
    assert FPGroup.parse(str(G)) == G


@pytest.mark.parametrize("text, b1", [
    ("gens: x y ; rels: ", 2),
    ("gens: x y ; rels: x x, y y y", 0),
    ("gens: x y t ; rels: t x T X, t y T Y", 3),
])
def test_abelianization_ranks(text, b1):
    assert FPGroup.parse(text).abelianization_rank() == b1


def test_mapping_torus_examples():
    assert mapping_torus_presentation(FreeAut.identity(XY)).abelianization_rank() == 3
    assert mapping_torus_presentation(twist_word_aut("Dx Dy^4")).abelianization_rank() == 1
    xyz = ("x", "y", "z")
    G = mapping_torus_presentation(FreeAut.identity(xyz), [(2, 2)])
    assert G.abelianization_rank() == 3


def test_kill_generator():
    G = kill_generators(FPGroup.free(XY), [1])
    assert G.names == ("x",) and G.abelianization_rank() == 1


def test_eliminate_generator_substitutes():
    G = FPGroup.parse("gens: x y z ; rels: z x")
    H = eliminate_generator(G, 2, FreeWord.parse("x y X Y", ("x", "y", "z")))
    assert H.names == XY
    assert str(H.relators[0]) == "x y X Y x"


def test_theta_of_identity():
    assert theta(FreeAut.identity(torus_names(3)), 2).is_identity()


def test_boundary_words_and_filling():
    b = torus_boundary_words(3)
    assert [str(w) for w in b] == ["z1", "z2", "Z2 Z1 x y X Y"]
    q = filling_map(3, 1)
    assert str(q(b[0])) == "x y X Y" and q(b[1]).is_identity()


@given(twist_words)
def test_twists_fix_punctures_of_multipunctured_torus(word):
    f = twist_word_aut(word, torus_names(3))
    assert fixes_punctures(f, 3)
    for i in (1, 2, 3):
        assert is_rank2_automorphism(list(theta(f, i).images))


@given(twist_words, st.sampled_from([(2, 2), (2, 3), (3, 4), (1, 2)]))
def test_killing_cone_generators_does_not_raise_b1(word, cones):
    names = torus_names(2)
    f = twist_word_aut(word, names)
    beta = torus_boundary_words(2)
    cone = [(b, n) for b, n in zip(beta, cones) if n > 1]
    filled = [b for b, n in zip(beta, cones) if n == 1]
    G = mapping_torus_presentation(f, cone, filled)
    assert G.abelianization_rank() >= kill_generators(G, [2]).abelianization_rank()


def test_subgroup_of_free_group():
    H, tree = subgroup_presentation(FPGroup.free(XY), [Perm.from_cycles("(1 2)", 2),
                                                     Perm.identity(2)])
    assert len(H.names) == 3 and not H.relators


def test_index_one_subgroup_is_same_group():
    G = FPGroup.parse("gens: x y ; rels: x x, x y X Y")
    H, _ = subgroup_presentation(G, [Perm.identity(1), Perm.identity(1)])
    assert len(H.names) == 2
    assert H.abelian_invariants() == G.abelian_invariants()


def test_subgroup_of_cyclic_quotient():
    # <x | x^6> with index-3 subgroup <x^3> = Z/2
    G = FPGroup.parse("gens: x ; rels: x x x x x x")
    H, _ = subgroup_presentation(G, [Perm.from_cycles("(1 2 3)", 3)])
    assert H.abelian_invariants() == (0, [2])


@given(st.integers(0, 10**6))
def test_finite_index_subgroup_b1_not_smaller(seed):
    from bundlecover.pipeline import transfer_check
    from bundlecover.exact_algebra import random_transitive
    rng = random.Random(seed)
    d = rng.randint(1, 6)
    rep = random_transitive(d, 2, rng)
    w = [rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(1, 5))]
    p = Perm.identity(d)
    for a in w:
        p = p * (rep[abs(a) - 1] if a > 0 else rep[abs(a) - 1].inverse())
    G = FPGroup(XY, (FreeWord(tuple(w), XY) ** p.order(),))
    assert transfer_check(G, rep)["holds"]
