import random

import pytest
from hypothesis import given

from syngraph.annotations import DependencyArc
from syngraph.projection import Leaf, Phrase, TreeError, head_word, invert, leaves, project
from golden import tree_need_it, tree_put_in_there, tree_telephone
from strategies import arc_in_trees, const_trees


def arcs(*pairs):
    return frozenset(DependencyArc(dep=d, head=h) for d, h in pairs)


def test_head_word_leaf():
    assert head_word(Leaf(3)) == 3


def test_head_word_phrase():
    assert head_word(tree_telephone()) == 3  # the finite verb position


def test_head_word_nested_phrase():
    inner = Phrase(head=Leaf(5), complements=(Leaf(4),))
    assert head_word(Phrase(head=inner, complements=(Leaf(1),))) == 5


def test_project_worked_tree():
    assert project(tree_telephone()) == arcs((4, 5), (5, 3), (2, 3))


def test_project_put_in_there():
    assert project(tree_put_in_there()) == arcs((3, 2), (2, 1))


def test_project_single_leaf():
    assert project(Leaf(1)) == frozenset()


def test_project_multiple_complements():
    # one head with two dependents, as in "my need it" flattened
    tree = Phrase(head=Leaf(2), complements=(Leaf(1), Leaf(3)))
    assert project(tree) == arcs((1, 2), (3, 2))


def test_project_rejects_duplicate_positions():
    with pytest.raises(TreeError):
        project(Phrase(head=Leaf(1), complements=(Leaf(1),)))


def test_project_rejects_empty_complements():
    with pytest.raises(TreeError):
        project(Phrase(head=Leaf(1), complements=()))


def test_invert_put_in_there():
    tree = invert(arcs((3, 2), (2, 1)), order=(1, 2, 3))
    assert tree == Phrase(head=Leaf(1), complements=(Phrase(head=Leaf(2), complements=(Leaf(3),)),))


def test_invert_single_position():
    assert invert(frozenset(), order=(7,)) == Leaf(7)


def test_invert_rejects_two_roots():
    with pytest.raises(TreeError):
        invert(arcs((2, 1)), order=(1, 2, 3))


def test_invert_rejects_cycle():
    with pytest.raises(TreeError):
        invert(arcs((1, 2), (2, 1)), order=(1, 2))


def test_invert_rejects_double_head():
    with pytest.raises(TreeError):
        invert(arcs((1, 2), (1, 3)), order=(1, 2, 3))


def test_invert_round_trips_worked_example():
    a = project(tree_telephone())
    assert project(invert(a, order=(2, 3, 4, 5))) == a


def test_invert_preserves_root():
    a = project(tree_need_it())
    assert head_word(invert(a, order=(2, 3))) == head_word(tree_need_it())


@given(arc_in_trees())
def test_project_invert_round_trip(pair):
    tree_arcs, order = pair
    assert project(invert(tree_arcs, order)) == tree_arcs


@given(const_trees())
def test_arc_count_is_leaves_minus_one(tree):
    assert len(project(tree)) == len(leaves(tree)) - 1


@given(const_trees())
def test_projection_is_in_tree_rooted_at_head(tree):
    a = project(tree)
    positions = leaves(tree)
    headed = {x.dep for x in a}
    roots = [p for p in positions if p not in headed]
    assert roots == [head_word(tree)]


def test_round_trip_loop_seeded():
    rng = random.Random(7)
    from strategies import random_in_tree

    for _ in range(200):
        n = rng.randint(1, 10)
        positions = sorted(rng.sample(range(1, 30), n))
        a = random_in_tree(rng, positions)
        assert project(invert(a, positions)) == a
