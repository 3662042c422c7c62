"""Head/complement constituency trees and their projection to dependency arcs.

A tree node is either a leaf (one token position) or a phrase with a
designated head child and one or more complement children. Projection
emits one arc per complement, from the complement's head word to the
phrase's head word, so an n-leaf tree always projects to n-1 arcs and
the arc set is an in-tree rooted at the sentence head word.

The inverse direction rebuilds a tree from an arc in-tree. Merge order
is not recoverable when a head has several dependents, so the inverse
canonicalizes by attaching the surface-closest dependent first; the
guaranteed round-trip is on arc sets, not tree shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .annotations import DependencyArc


class TreeError(ValueError):
    """Raised for malformed trees or non-tree arc sets."""


@dataclass(frozen=True)
class Leaf:
    position: int


@dataclass(frozen=True)
class Phrase:
    head: "ConstituencyNode"
    complements: tuple["ConstituencyNode", ...]
    #: Set on the root when a finite verb heads the sentence.
    finite_verb_head: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "complements", tuple(self.complements))


ConstituencyNode = Union[Leaf, Phrase]


def leaves(node: ConstituencyNode) -> tuple[int, ...]:
    """All leaf positions, left-branch first."""
    if isinstance(node, Leaf):
        return (node.position,)
    out = leaves(node.head)
    for c in node.complements:
        out += leaves(c)
    return out


def validate_tree(node: ConstituencyNode) -> None:
    """Raise TreeError unless every phrase has complements and leaf positions are distinct."""

    def walk(n: ConstituencyNode) -> None:
        if isinstance(n, Leaf):
            return
        if not isinstance(n, Phrase):
            raise TreeError(f"not a tree node: {n!r}")
        if not n.complements:
            raise TreeError("phrase without complements")
        walk(n.head)
        for c in n.complements:
            walk(c)

    walk(node)
    positions = leaves(node)
    if len(set(positions)) != len(positions):
        raise TreeError(f"duplicate leaf positions in {sorted(positions)}")


def head_word(node: ConstituencyNode) -> int:
    """The token position heading the (sub)tree: follow head children down."""
    while isinstance(node, Phrase):
        node = node.head
    return node.position


def project(tree: ConstituencyNode) -> frozenset[DependencyArc]:
    """Project a constituency tree to its dependency arc set."""
    validate_tree(tree)
    arcs: set[DependencyArc] = set()

    def walk(n: ConstituencyNode) -> None:
        if isinstance(n, Leaf):
            return
        h = head_word(n)
        for c in n.complements:
            arcs.add(DependencyArc(dep=head_word(c), head=h))
            walk(c)
        walk(n.head)

    walk(tree)
    return frozenset(arcs)


def _check_in_tree(arcs: frozenset[DependencyArc], positions: Sequence[int]) -> int:
    """Validate that arcs form an in-tree over positions; return the root."""
    pos_set = set(positions)
    if len(pos_set) != len(positions):
        raise TreeError("duplicate positions in surface order")
    head_of: dict[int, int] = {}
    for a in arcs:
        if a.dep == a.head:
            raise TreeError(f"self-loop at {a.dep}")
        if a.dep not in pos_set or a.head not in pos_set:
            raise TreeError(f"arc {a.dep}->{a.head} outside positions")
        if a.dep in head_of:
            raise TreeError(f"token {a.dep} has two heads")
        head_of[a.dep] = a.head
    roots = [p for p in positions if p not in head_of]
    if len(roots) != 1:
        raise TreeError(f"arc set has {len(roots)} roots, expected 1")
    for start in positions:
        seen = {start}
        cur = start
        while cur in head_of:
            cur = head_of[cur]
            if cur in seen:
                raise TreeError(f"cycle through {cur}")
            seen.add(cur)
    return roots[0]


def invert(arcs: frozenset[DependencyArc] | set[DependencyArc], order: Sequence[int]) -> ConstituencyNode:
    """Rebuild a constituency tree from an arc in-tree.

    ``order`` lists every member position in surface order (needed for
    the one-word case and for the closest-first merge canonicalization).
    """
    arcs = frozenset(arcs)
    if not order:
        raise TreeError("empty position list")
    root = _check_in_tree(arcs, order)
    index = {p: i for i, p in enumerate(order)}
    dependents: dict[int, list[int]] = {}
    for a in arcs:
        dependents.setdefault(a.head, []).append(a.dep)

    def build(pos: int) -> ConstituencyNode:
        node: ConstituencyNode = Leaf(pos)
        # Closest dependents merge innermost; ties go to the right side.
        deps = sorted(
            dependents.get(pos, ()),
            key=lambda d: (abs(index[d] - index[pos]), 0 if index[d] > index[pos] else 1),
        )
        for d in deps:
            node = Phrase(head=node, complements=(build(d),))
        return node

    return build(root)
