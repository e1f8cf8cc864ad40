from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lamprate.groups import (
    FreeGroup,
    FreeProduct,
    FreeProductC2C2,
    GeneratorSet,
    IntegerLattice,
    MetricQueryTooLarge,
    UsageError,
    all_words,
    as_fraction,
    build_group,
    c2c2_subgroup_index,
    hermite_rows,
    lattice_contains,
    search_distance,
)

from .conftest import roster

ROSTER = roster()


def words(group, max_len=6):
    gens = list(group.generators.elements)

    @st.composite
    def _w(draw):
        x = group.identity
        for g in draw(st.lists(st.sampled_from(gens), max_size=max_len)):
            x = group.multiply(x, g)
        return x

    return _w()


@st.composite
def group_and_points(draw, k=3):
    g = draw(st.sampled_from(ROSTER))
    return (g,) + tuple(draw(words(g)) for _ in range(k))


def test_as_fraction():
    assert as_fraction("3/2") == Fraction(3, 2)
    assert as_fraction(0.1) == Fraction(1, 10)
    assert as_fraction(2) == 2
    with pytest.raises(UsageError):
        as_fraction("abc")


def test_generator_set_validation():
    with pytest.raises(UsageError):
        GeneratorSet(((1,), (-1,)), (1, 0), ("1", "-1"))
    with pytest.raises(UsageError):
        GeneratorSet(((1,), (1,)), (1, 1), ("1", "1"))
    gs = GeneratorSet(((1,), (-1,)), ("1/2", "1/2"), ("1", "-1"))
    assert gs.scale == 2 and gs.int_lengths == (1, 1) and gs.r1 == Fraction(1, 2)


def test_asymmetric_lengths_rejected():
    with pytest.raises(UsageError):
        IntegerLattice(1, GeneratorSet(((1,), (-1,)), (1, 2), ("1", "-1")))


def test_weighted_z_distance_examples(z_weighted):
    # 4 = 1+1+1+1 costs 4; via 3+1 costs 6
    assert z_weighted.distance((0,), (4,)) == 4
    assert z_weighted.distance((0,), (-7,)) == 7


def test_z_cheap_big_steps():
    z = IntegerLattice.from_steps({1: 1, 2: "3/2"})
    assert z.distance((0,), (2,)) == Fraction(3, 2)
    assert z.distance((0,), (3,)) == Fraction(5, 2)
    assert z.distance((0,), (5,)) == 4
    assert z.distance((0,), (6,)) == Fraction(9, 2)


def test_free_group_reduction(f2):
    a, A = f2.parse("a"), f2.parse("A")
    assert f2.multiply(a, A) == ()
    assert f2.parse("abBA") == ()
    assert f2.norm(f2.parse("abA")) == 3
    assert f2.format(f2.parse("aBa")) == "aBa"
    assert len(f2.ball((), 2)) == 17


def test_c2c2_involutions(c2c2):
    a = c2c2.parse("a")
    assert c2c2.multiply(a, a) == ()
    assert c2c2.inverse(c2c2.parse("ab")) == c2c2.parse("ba")
    assert c2c2_subgroup_index(c2c2.parse("abab")) == 2
    assert c2c2_subgroup_index(c2c2.parse("ba")) == -1
    with pytest.raises(UsageError):
        c2c2_subgroup_index(a)


def test_ball_sizes_match_enumeration():
    g = FreeProduct(1, 1, [1, 1])
    n2 = sum(1 for w in all_words(g, 3) if len(w) <= 3)
    assert len(g.ball((), 3)) == n2


def test_lattice_must_generate():
    with pytest.raises(UsageError):
        IntegerLattice.from_steps({2: 1})
    with pytest.raises(UsageError):
        IntegerLattice.from_steps({(1, 0): 1, (2, 0): 1})


def test_hermite_and_membership():
    assert len(hermite_rows([(2,), (3,)], 1)) == 1
    assert lattice_contains([(2,), (3,)], (1,), 1)
    assert not lattice_contains([(2,), (4,)], (1,), 1)
    assert lattice_contains([(1, 1), (1, -1)], (2, 0), 2)
    assert not lattice_contains([(1, 1), (1, -1)], (1, 0), 2)


def test_search_cap():
    z = IntegerLattice.from_steps({1: 1, 2: 3}, search_cap=50)
    with pytest.raises(MetricQueryTooLarge):
        z.distance((0,), (1000,))


def test_build_group_specs():
    g = build_group({"kind": "free_group", "rank": 2, "lengths": {"a": "1/2"}})
    assert g.generators.length_of((1,)) == Fraction(1, 2)
    assert g.generators.length_of((2,)) == 1
    z = build_group({"kind": "lattice", "generators": [{"vector": [1], "length": "1"}]})
    assert z.distance((0,), (-3,)) == 3
    c = build_group({"kind": "c2c2"})
    assert c.involutions == 2
    with pytest.raises(UsageError):
        build_group({"kind": "free_group", "lengths": {"q": 1}})
    with pytest.raises(UsageError):
        build_group({"kind": "torus"})


@pytest.mark.parametrize("g", ROSTER, ids=lambda g: g.kind)
def test_fast_metric_matches_generic_search(g):
    pts = sorted(g.ball(g.identity, 3 * g.generators.r1))[:40]
    for x in pts[:8]:
        for y in pts:
            assert g.distance(x, y) == search_distance(g, x, y)


@given(group_and_points())
def test_metric_axioms(data):
    g, x, y, z = data
    d = g.distance
    assert d(x, x) == 0
    assert (d(x, y) == 0) == (x == y)
    assert d(x, y) == d(y, x)
    assert d(x, z) <= d(x, y) + d(y, z)
    # left invariance
    assert d(g.multiply(z, x), g.multiply(z, y)) == d(x, y)


@given(group_and_points())
def test_group_axioms(data):
    g, x, y, z = data
    m = g.multiply
    assert m(m(x, y), z) == m(x, m(y, z))
    assert m(x, g.identity) == x == m(g.identity, x)
    assert m(x, g.inverse(x)) == g.identity


@given(group_and_points(k=1))
def test_parse_format_roundtrip(data):
    g, x = data
    assert g.parse(g.format(x)) == x


def test_generator_lengths_are_distances():
    for g in ROSTER:
        for s, l in zip(g.generators.elements, g.generators.lengths):
            assert g.norm(s) <= l


def test_free_group_default_lengths():
    g = FreeGroup(3)
    assert g.kind == "free_group" and len(g.generators) == 6
    assert FreeProductC2C2().kind == "c2c2"
