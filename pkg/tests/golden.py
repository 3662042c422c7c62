"""Hand-checked fixtures for the worked example: the four constituency
trees over the extracted utterances, the resulting word/edge sets, and
the document built by projecting those trees."""

from __future__ import annotations

from syngraph.annotations import (
    AnnotatedDocument,
    AnnotatedUtterance,
    AnnotationDecision,
    DecisionStatus,
    RejectReason,
    Structure,
)
from syngraph.chat import RawUtterance
from syngraph.projection import ConstituencyNode, Leaf, Phrase, project

#: Expected word-type node set (9 types).
GOLDEN_W = frozenset(
    {"telephone", "go", "right", "there", "need", "it", "my", "put", "in"}
)

#: Expected directed edge set (7 links, dependent -> head).
GOLDEN_E = frozenset(
    {
        ("telephone", "go"),
        ("right", "there"),
        ("there", "go"),
        ("it", "need"),
        ("my", "need"),
        ("there", "in"),
        ("in", "put"),
    }
)

GOLDEN_STRUCTURE_SIZES = (4, 2, 3, 3)
GOLDEN_S_AVG = 3.0


def tree_telephone() -> ConstituencyNode:
    # [telephone [go [right there]]] over "xxx telephone go right there"
    inner = Phrase(head=Leaf(5), complements=(Leaf(4),))
    vp = Phrase(head=Leaf(3), complements=(inner,))
    return Phrase(head=vp, complements=(Leaf(2),), finite_verb_head=True)


def tree_need_it() -> ConstituencyNode:
    # [need it] over positions 2-3 of "xxx need it my need it xxx"
    return Phrase(head=Leaf(2), complements=(Leaf(3),), finite_verb_head=True)


def tree_my_need_it() -> ConstituencyNode:
    # [my [need it]] over positions 4-6
    vp = Phrase(head=Leaf(5), complements=(Leaf(6),))
    return Phrase(head=vp, complements=(Leaf(4),), finite_verb_head=True)


def tree_put_in_there() -> ConstituencyNode:
    # [put [in there]]
    pp = Phrase(head=Leaf(2), complements=(Leaf(3),))
    return Phrase(head=Leaf(1), complements=(pp,), finite_verb_head=True)


def golden_document(utterances: list[RawUtterance], corpus_id: str = "peter7") -> AnnotatedDocument:
    """Annotate the six extracted utterances by projecting the four trees."""
    assert len(utterances) == 6
    rejected_unclear = AnnotationDecision(
        status=DecisionStatus.REJECTED, reason=RejectReason.UNTRANSCRIBED
    )
    rejected_null = AnnotationDecision(
        status=DecisionStatus.REJECTED, reason=RejectReason.OTHER, note="null utterance (no speech)"
    )
    annotated = (
        AnnotatedUtterance(
            tokens=utterances[0].tokens,
            structures=(Structure.from_arcs(project(tree_telephone())),),
        ),
        AnnotatedUtterance(
            tokens=utterances[1].tokens,
            structures=(
                Structure.from_arcs(project(tree_need_it())),
                Structure.from_arcs(project(tree_my_need_it())),
            ),
        ),
        AnnotatedUtterance(tokens=utterances[2].tokens, decision=rejected_unclear),
        AnnotatedUtterance(tokens=utterances[3].tokens, decision=rejected_null),
        AnnotatedUtterance(tokens=utterances[4].tokens, decision=rejected_unclear),
        AnnotatedUtterance(
            tokens=utterances[5].tokens,
            structures=(Structure.from_arcs(project(tree_put_in_there())),),
        ),
    )
    return AnnotatedDocument(corpus_id=corpus_id, utterances=annotated)
