from __future__ import annotations

import math

import pytest
from hypothesis import given, settings, strategies as st

from braidregions.spec_model import OffsetSpec, preset
from braidregions.trees import (
    BoxedTree,
    MarkedTree,
    PlaneTree,
    TreeError,
    boxing_to_marking,
    cadet,
    cadet_chains,
    count_trees,
    enumerate_boxings,
    enumerate_general_boxings,
    enumerate_markings,
    enumerate_trees,
    is_cadet_sequence,
    is_s_cadet_sequence,
    marking_to_boxing,
    parse_tree,
    signed_boxing_sum,
)

# n=7, m=2 tree with boxes (2), (5), (4,3), (7,1,6) under S = {-2, 1}
SEVEN = "7(4(.,.,3(.,.,.)),5(2(.,.,.),.,.),1(6(.,.,.),.,.))"
SEVEN_SPEC = OffsetSpec.uniform(7, [-2, 1])


@pytest.mark.parametrize("n, m", [(n, m) for n in range(1, 5) for m in range(3)] + [(5, 1)])
def test_tree_counts(n, m):
    want = math.factorial(n) * math.comb((m + 1) * n, n) // (m * n + 1)
    trees = list(enumerate_trees(n, m))
    assert count_trees(n, m) == want == len(trees) == len(set(trees))


ALL_SMALL = [t for n in range(1, 4) for m in range(3) for t in enumerate_trees(n, m)]


@given(st.sampled_from(ALL_SMALL))
def test_encoding_round_trip(tree):
    assert parse_tree(tree.encode()) == tree


@pytest.mark.parametrize("text", ["", "1(.,", "1(2(.,.),2(.,.))", "1(.,.)x", "a(.)", "1(2(.),.)"])
def test_parse_tree_rejects(text):
    with pytest.raises(TreeError):
        parse_tree(text)


def test_accessors():
    t = parse_tree(SEVEN)
    assert t.root == 7 and t.m == 2
    assert t.parent(3) == 4 and t.parent(7) is None
    assert t.parent_slot(1) == (7, 2)
    assert t.lsib(1) == 2 and t.lsib(2) == 0 and t.lsib(7) == 0
    assert cadet(t, 7) == 1 and cadet(t, 4) == 3 and cadet(t, 5) == 2 and cadet(t, 3) is None
    assert sorted(cadet_chains(t)) == [(4, 3), (5, 2), (7, 1, 6)]


def test_padded_tree_keeps_structure():
    t = parse_tree("2(1(.,.),.)")
    p = t.padded(3)
    assert p.encode() == "2(1(.,.,.),.,.)"
    assert cadet(p, 2) == 1


def test_cadet_sequences():
    t = parse_tree(SEVEN)
    assert is_cadet_sequence(t, (7, 1, 6))
    assert not is_cadet_sequence(t, (7, 4))
    with pytest.raises(TreeError):
        is_s_cadet_sequence(SEVEN_SPEC, t, (7, 4))


def test_seven_node_boxing_is_an_s_boxing():
    t = parse_tree(SEVEN)
    boxes = frozenset({(2,), (5,), (4, 3), (7, 1, 6)})
    boxings = {b.boxes for b in enumerate_boxings(SEVEN_SPEC, t)}
    assert boxes in boxings
    assert BoxedTree(t, boxes).sign() == -1


def test_arity_mismatch():
    with pytest.raises(TreeError):
        list(enumerate_boxings(preset("braid", 2), parse_tree("1(2(.,.),.)")))


@pytest.mark.parametrize("n, m", [(2, 1), (3, 1), (3, 2), (4, 1)])
def test_boxing_marking_bijection(n, m):
    for tree in enumerate_trees(n, m):
        boxings = list(enumerate_general_boxings(tree))
        markings = {boxing_to_marking(b) for b in boxings}
        assert len(markings) == len(boxings)
        assert markings == set(enumerate_markings(tree))
        assert all(mk.is_valid() for mk in markings)
        assert all(marking_to_boxing(boxing_to_marking(b)) == b for b in boxings)


def test_invalid_marking():
    t = parse_tree("2(1(.,.),.)")
    # 2 -> 1 sits in slot 0, so it may only be marked when increasing
    assert not MarkedTree(t, frozenset({(2, 1)})).is_valid()
    assert MarkedTree(t, frozenset()).is_valid()


@settings(max_examples=40)
@given(st.sampled_from([t for t in ALL_SMALL if t.n == 3 and t.m == 1]),
       st.lists(st.lists(st.integers(-1, 1), max_size=3, unique=True), min_size=3, max_size=3))
def test_s_boxings_are_general_boxings(tree, offs):
    spec = OffsetSpec(3, tuple(tuple(sorted(o)) for o in offs))
    general = set(enumerate_general_boxings(tree))
    for boxed in enumerate_boxings(spec, tree, check_arity=False):
        assert boxed in general
        assert all(is_s_cadet_sequence(spec, tree, box) for box in boxed.boxes)


def test_signed_sum_braid_tree():
    # the braid arrangement has one tree per permutation, each contributing 1
    spec = preset("braid", 3)
    for tree in enumerate_trees(3, 0):
        assert signed_boxing_sum(spec, tree)[0] == 1


def test_plane_tree_validation():
    with pytest.raises(TreeError):
        PlaneTree(2, 1, 1, ((None,), (None,)))
    with pytest.raises(TreeError):
        PlaneTree(2, 1, 1, ((2,), (1,)))
