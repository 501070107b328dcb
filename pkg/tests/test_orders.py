from itertools import combinations

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_system
from orders import (
    Poset,
    as_interval,
    bruhat_leq,
    bruhat_leq_subword,
    build_interval,
    check_deodhar_property,
    dump_interval,
    has_diamond_property,
    induced_subposet,
    is_eulerian,
    is_graded,
    mobius,
    weak_leq,
)
from errors import EmptyIntervalError, PreconditionError

PENTAGON = {(0, 1), (1, 2), (0, 2), (2, 4), (1, 4), (0, 4), (0, 3), (3, 4)}


def pentagon():
    return Poset(range(5), leq=lambda a, b: a == b or (a, b) in PENTAGON)


def boolean_lattice(n):
    subsets = [frozenset(c) for k in range(n + 1) for c in combinations(range(n), k)]
    return Poset(subsets, leq=lambda a, b: a <= b, rank={x: len(x) for x in subsets})


# ----- comparisons -----


def test_bruhat_matches_subword_oracle_on_b3(b3):
    elements = b3.all_elements()
    for u in elements:
        for v in elements:
            assert bruhat_leq(b3, u, v) == bruhat_leq_subword(b3, u, v)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=12), st.lists(st.integers(0, 2), max_size=12))
def test_bruhat_matches_subword_oracle_on_affine_a2(u_word, v_word):
    system = make_system("affA2")
    u = system.canonicalize(u_word)
    v = system.canonicalize(v_word)
    assert bruhat_leq(system, u, v) == bruhat_leq_subword(system, u, v)


def test_weak_order_refines_bruhat(a3):
    elements = a3.all_elements()
    for u in elements:
        for v in elements:
            if weak_leq(a3, u, v):
                assert bruhat_leq(a3, u, v)


def test_identity_and_longest_are_extremes(h3):
    w0 = h3.longest_element(range(3))
    for x in h3.enumerate_ball(4):
        assert bruhat_leq(h3, h3.identity, x)
        assert bruhat_leq(h3, x, w0)
        assert weak_leq(h3, x, w0)


def test_generators_are_incomparable(a3):
    s1, s2 = a3.generators[:2]
    assert not bruhat_leq(a3, s1, s2)
    assert not bruhat_leq(a3, s2, s1)


# ----- posets and intervals -----


def test_a2_bruhat_and_weak_covers(a2):
    elements = a2.all_elements()
    w0 = a2.longest_element([0, 1])
    bruhat = build_interval("bruhat", elements, a2.identity, w0)
    weak = build_interval("weak", elements, a2.identity, w0)
    assert len(bruhat) == len(weak) == 6
    assert len(bruhat.covers()) == 8
    assert len(weak.covers()) == 6
    assert bruhat.length == 3
    hasse = bruhat.hasse()
    assert isinstance(hasse, nx.DiGraph)
    assert hasse.number_of_edges() == 8


def test_interval_bounds(a3):
    elements = a3.all_elements()
    v = a3.canonicalize([0, 1, 0])
    interval = build_interval("bruhat", elements, a3.identity, v)
    assert interval.bottom is a3.identity
    assert interval.top is v
    assert len(interval) == 6
    assert len(interval.proper_part()) == 4
    assert all(x.length < 3 for x in interval.proper_part())


def test_empty_interval_raises(a3):
    s1, s2 = a3.generators[:2]
    with pytest.raises(EmptyIntervalError):
        build_interval("bruhat", a3.all_elements(), s1, s2)
    poset = induced_subposet("bruhat", a3.all_elements(), lambda x: True)
    with pytest.raises(EmptyIntervalError):
        poset.interval(s1, s2)


def test_unknown_order_rejected(a3):
    with pytest.raises(PreconditionError):
        build_interval("dominance", a3.all_elements(), a3.identity, a3.identity)


def test_sub_interval_matches_direct_build(b3):
    elements = b3.all_elements()
    poset = induced_subposet("bruhat", elements, lambda x: True)
    u = b3.canonicalize([1])
    v = b3.canonicalize([0, 1, 0, 2])
    direct = build_interval("bruhat", elements, u, v)
    nested = poset.interval(u, v)
    assert set(direct.elements) == set(nested.elements)
    assert dump_interval(direct) == dump_interval(nested)


def test_dump_interval(a2):
    interval = build_interval("bruhat", a2.all_elements(), a2.identity, a2.generators[0])
    assert dump_interval(interval) == ["e < 1"]


def test_linear_extension_order():
    poset = boolean_lattice(3)
    rel = poset.relation
    n = len(poset)
    assert not any(rel[j, i] for i in range(n) for j in range(i + 1, n))


def test_spot_check():
    assert boolean_lattice(3).spot_check(samples=500) is None
    broken = Poset(["a", "b"], relation=np.ones((2, 2), dtype=bool))
    kind, pair = broken.spot_check()
    assert kind == "antisymmetry"
    assert set(pair) == {"a", "b"}


def test_minimal_and_maximal():
    poset = Poset(["x", "y", "z"], leq=lambda a, b: a == b or (a, b) in {("x", "z"), ("y", "z")})
    assert sorted(poset.minimal()) == ["x", "y"]
    assert poset.maximal() == ["z"]
    assert poset.bottom is None
    assert not poset.is_bounded()
    with pytest.raises(PreconditionError):
        as_interval(poset)


# ----- grading, Moebius, Eulerian -----


def test_pentagon_is_not_graded():
    graded, (short, long) = is_graded(pentagon())
    assert not graded
    assert short == [0, 3, 4]
    assert long == [0, 1, 2, 4]
    with pytest.raises(PreconditionError):
        is_eulerian(pentagon())
    assert not has_diamond_property(pentagon())


def test_boolean_lattice_is_eulerian():
    lattice = boolean_lattice(3)
    graded, rho = is_graded(lattice)
    assert graded
    assert rho[frozenset(range(3))] == 3
    assert is_eulerian(lattice)
    assert has_diamond_property(lattice)
    mu = mobius(lattice)
    assert mu[(frozenset(), frozenset(range(3)))] == -1


def test_chain_is_not_eulerian():
    chain = Poset([0, 1, 2], leq=lambda a, b: a <= b)
    assert is_graded(chain)[0]
    assert not is_eulerian(chain)
    assert mobius(chain)[(0, 2)] == 0


@pytest.mark.parametrize("name", ["A3", "B3"])
def test_full_bruhat_order_is_eulerian(name):
    system = make_system(name)
    elements = system.all_elements()
    w0 = system.longest_element(range(system.rank))
    interval = build_interval("bruhat", elements, system.identity, w0)
    assert is_eulerian(interval)
    assert has_diamond_property(interval)
    assert mobius(interval)[(system.identity, w0)] == (-1) ** w0.length


def test_weak_order_is_not_eulerian(a2):
    weak = build_interval("weak", a2.all_elements(), a2.identity, a2.longest_element([0, 1]))
    assert is_graded(weak)[0]
    assert not is_eulerian(weak)


# ----- Deodhar characterisation -----


@pytest.mark.parametrize("name", ["A3", "B3", "I2(5)"])
def test_deodhar_property_holds(name):
    system = make_system(name)
    assert check_deodhar_property(system, system.all_elements()) is None


def test_deodhar_property_on_affine_ball(aff_a2):
    assert check_deodhar_property(aff_a2, aff_a2.enumerate_ball(4)) is None
