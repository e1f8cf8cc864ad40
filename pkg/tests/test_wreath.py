from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lamprate.groups import FreeGroup, IntegerLattice, UsageError
from lamprate.wreath import Configuration, Lamplighter

from .conftest import roster

BASES = roster()


@st.composite
def lamplighter_elements(draw, k=3):
    base = draw(st.sampled_from(BASES))
    r = draw(st.sampled_from([2, 3]))
    L = Lamplighter(base, r)
    gens = L.generators()
    out = []
    for _ in range(k):
        u = L.identity
        for g in draw(st.lists(st.sampled_from(gens), max_size=8)):
            u = L.multiply(u, g)
        out.append(u)
    return (L,) + tuple(out)


def test_configuration_drops_zero_states():
    c = Configuration({(1,): 2, (2,): 1}, modulus=2)
    assert c.support == frozenset({(2,)})
    assert c == Configuration({(2,): 3}, 2)
    assert hash(c) == hash(Configuration({(2,): 1}, 2))


def test_multiplication_law():
    z = IntegerLattice.from_steps({1: 1})
    L = Lamplighter(z, 2)
    u = L.element({(0,): 1}, (1,))
    v = L.element({(0,): 1, (2,): 1}, (3,))
    w = L.multiply(u, v)
    # (eta1 + x eta2, x y) with x = 1
    assert w.position == (4,)
    assert w.config.support == frozenset({(0,), (1,), (3,)})


def test_switch_then_walk_and_walk_then_switch():
    f2 = FreeGroup(2)
    L = Lamplighter(f2, 2)
    a = f2.parse("a")
    toggle, move = L.generators()[0], L.element({}, a)
    assert L.multiply(toggle, move).config.support == frozenset({()})
    assert L.multiply(move, toggle).config.support == frozenset({a})


def test_modulus_mismatch():
    z = IntegerLattice.from_steps({1: 1})
    with pytest.raises(UsageError):
        Lamplighter(z, 2).multiply(Lamplighter(z, 3).identity, Lamplighter(z, 2).identity)
    with pytest.raises(UsageError):
        Lamplighter(z, 1)


def test_length_uses_tsp():
    z = IntegerLattice.from_steps({1: 1})
    L = Lamplighter(z, 2)
    u = L.element({(-1,): 1}, (2,))
    val, res = L.length(u, c_lamp="1/2")
    assert val == 4 + Fraction(1, 2)
    assert res.mode == "exact-line"


@given(lamplighter_elements())
def test_wreath_group_axioms(data):
    L, u, v, w = data
    m = L.multiply
    assert m(m(u, v), w) == m(u, m(v, w))
    assert m(u, L.identity) == u == m(L.identity, u)
    assert m(u, L.inverse(u)) == L.identity == m(L.inverse(u), u)


@given(lamplighter_elements(k=1))
def test_json_roundtrip(data):
    L, u = data
    assert L.from_json(L.to_json(u)) == u


@given(lamplighter_elements(k=2))
def test_lamplighter_length_is_subadditive(data):
    L, u, v = data
    if len(u.config) + len(v.config) > 9:
        return
    luv, _ = L.length(L.multiply(u, v), c_lamp=1)
    lu, _ = L.length(u, c_lamp=1)
    lv, _ = L.length(v, c_lamp=1)
    assert luv <= lu + lv
