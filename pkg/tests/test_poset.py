import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ndrank import poset
from ndrank.errors import CycleError, ParseError, TooLarge, UnknownLabel

from helpers import random_dag, random_forest, random_poset


def test_from_relation_already_reduced():
    P = poset.from_relation(["a", "b", "c"], [("a", "c"), ("b", "c")])
    assert set(P.covers) == {(0, 2), (1, 2)}


def test_from_relation_reduces_transitive_edge():
    P = poset.from_relation([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    assert set(P.covers) == {(0, 1), (1, 2)}


def test_from_relation_cycle():
    with pytest.raises(CycleError):
        poset.from_relation(["a", "b"], [("a", "b"), ("b", "a")])


def test_from_relation_unknown_label():
    with pytest.raises(UnknownLabel):
        poset.from_relation(["a", "b"], [("a", "z")])


def test_chain_and_trivial():
    assert set(poset.chain(4).covers) == {(0, 1), (1, 2), (2, 3)}
    assert poset.trivial(3).covers == ()
    assert poset.chain(1).p == 1 and poset.chain(1).covers == ()


def test_product_shapes():
    P = poset.product([poset.chain(2), poset.chain(3)])
    assert P.p == 6
    assert len(P.covers) == 7
    Q = poset.product([poset.trivial(2), poset.trivial(2)])
    assert Q.p == 4 and Q.covers == ()


def test_product_selenium_shape():
    rows = poset.from_relation(["I", "II", "III"], [("I", "III"), ("II", "III")])
    P = poset.product([rows, poset.chain(4)])
    assert P.p == 12
    assert len(P.covers) == 17


def test_product_leq_is_coordinatewise():
    rng = np.random.default_rng(0)
    for _ in range(20):
        A = random_poset(int(rng.integers(1, 4)), rng)
        B = random_poset(int(rng.integers(1, 4)), rng)
        P = poset.product([A, B])
        for xi, xl in enumerate(P.labels):
            for yi, yl in enumerate(P.labels):
                expect = (A.leq[A.index(xl[0]), A.index(yl[0])]
                          and B.leq[B.index(xl[1]), B.index(yl[1])])
                assert P.leq[xi, yi] == expect


def test_connected_upsets_chain():
    ups = poset.connected_upsets(poset.chain(3))
    assert [sorted(u) for u in ups] == [[2], [1, 2], [0, 1, 2]]


def test_connected_upsets_collider():
    P = poset.from_relation(["a", "b", "c"], [("a", "c"), ("b", "c")])
    ups = poset.connected_upsets(P)
    assert [sorted(u) for u in ups] == [[2], [0, 2], [1, 2], [0, 1, 2]]


def test_connected_upsets_grid_count():
    P = poset.product([poset.chain(2), poset.chain(3)])
    assert len(poset.connected_upsets(P)) == 9


def test_connected_upsets_guard():
    with pytest.raises(TooLarge):
        poset.connected_upsets(poset.trivial(25))


@pytest.mark.parametrize("p", [1, 2, 5, 8])
def test_count_antichains_chain(p):
    assert poset.count_antichains(poset.chain(p)) == p


def test_count_antichains_examples():
    P = poset.product([poset.chain(2), poset.chain(3)])
    assert poset.count_antichains(P) == 9
    assert poset.count_antichains(poset.trivial(3)) == 7


def test_antichains_binomial_formula():
    for p1 in range(1, 5):
        for p2 in range(1, 5):
            P = poset.product([poset.chain(p1), poset.chain(p2)])
            assert poset.count_antichains(P) == math.comb(p1 + p2, p1) - 1


def test_has_collider():
    assert not poset.has_collider(poset.chain(5))
    assert poset.has_collider(poset.from_relation("abc", [("a", "c"), ("b", "c")]))
    # rooted tree with all edges directed away from the root
    tree = poset.from_relation(
        list(range(9)),
        [(0, 1), (0, 2), (1, 3), (1, 4), (1, 5), (2, 6), (2, 7), (7, 8)])
    assert not poset.has_collider(tree)
    assert poset.is_simplicial(tree)


def test_upsets_vs_size_iff_no_collider():
    rng = np.random.default_rng(42)
    for _ in range(40):
        P = random_poset(int(rng.integers(1, 7)), rng)
        n = len(poset.connected_upsets(P))
        assert n >= P.p
        assert (n == P.p) == (not poset.has_collider(P))


def test_antichains_equal_upsets_with_maximum():
    rng = np.random.default_rng(7)
    for _ in range(30):
        base = random_dag(int(rng.integers(1, 5)), rng)
        # adjoin a top element so a maximum exists
        labels = list(base.labels) + ["top"]
        edges = [(base.labels[a], base.labels[b]) for a, b in base.covers]
        edges += [(lab, "top") for lab in base.labels]
        P = poset.from_relation(labels, edges)
        assert poset.count_antichains(P) == len(poset.connected_upsets(P))


def test_linear_extensions():
    assert len(poset.linear_extensions(poset.chain(3))) == 1
    assert len(poset.linear_extensions(poset.trivial(3))) == 6
    grid = poset.product([poset.chain(2), poset.chain(2)])
    assert len(poset.linear_extensions(grid)) == 2
    with pytest.raises(TooLarge):
        poset.linear_extensions(poset.trivial(13))


def test_linear_extensions_respect_order():
    rng = np.random.default_rng(3)
    P = random_forest(6, rng)
    for ext in poset.linear_extensions(P):
        pos = {x: i for i, x in enumerate(ext)}
        for a, b in P.covers:
            assert pos[a] < pos[b]


def test_count_linear_extensions_matches_enumeration():
    rng = np.random.default_rng(5)
    for _ in range(10):
        P = random_dag(int(rng.integers(1, 7)), rng)
        assert poset.count_linear_extensions(P) == len(poset.linear_extensions(P))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=12))
def test_closure_of_reduction_idempotent(pairs):
    edges = [(a, b) for a, b in pairs if a < b]
    P = poset.from_relation(list(range(6)), edges)
    Q = poset.from_relation(list(range(6)), [(a, b) for a, b in P.covers])
    assert np.array_equal(P.leq, Q.leq)
    assert set(P.covers) == set(Q.covers)


def test_product_associative_up_to_relabeling():
    A, B, C = poset.chain(2), poset.trivial(2), poset.chain(3)
    P1 = poset.product([A, B, C])
    P2 = poset.product([poset.product([A, B]), C])
    # same cover structure on flattened indices
    assert P1.p == P2.p
    assert set(P1.covers) == set(P2.covers)


def test_text_format_roundtrip():
    P = poset.from_relation(["lo", "mid", "hi"], [("lo", "mid"), ("mid", "hi")])
    text = poset.format_poset_text(P)
    Q = poset.parse_poset_text(text)
    assert Q.labels == ("lo", "mid", "hi")
    assert set(Q.covers) == set(P.covers)


def test_text_format_comments_and_errors():
    Q = poset.parse_poset_text("# a comment\nelements: a, b\n\na < b  # inline\n")
    assert set(Q.covers) == {(0, 1)}
    with pytest.raises(ParseError):
        poset.parse_poset_text("a < b\n")
    with pytest.raises(ParseError):
        poset.parse_poset_text("elements: a,b\na ? b\n")
    err = None
    try:
        poset.parse_poset_text("elements: a,b\na < z\n")
    except ParseError as exc:
        err = exc
    assert err is not None
