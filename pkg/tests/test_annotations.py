import pytest
from hypothesis import given

from syngraph.annotations import (
    AnnotatedDocument,
    AnnotatedUtterance,
    AnnotationDecision,
    DecisionStatus,
    DependencyArc,
    DgaParseError,
    DocumentValidationError,
    RejectReason,
    Structure,
    read_dga_xml,
    skeleton_document,
    structures_from_arcs,
    validate,
    write_dga_xml,
)
from syngraph.chat import make_token
from strategies import annotated_documents

TOKEN_ONLY_LISTING = b"""<?xml version="1.0" encoding="iso-8859-1"?>
<!DOCTYPE DGAdoc SYSTEM "dga.dtd">
<DGAdoc>
<s>
<tok>
<orth>put</orth>
<ordno>1</ordno>
</tok>
<tok>
<orth>in</orth>
<ordno>2</ordno>
</tok>
<tok>
<orth>there</orth>
<ordno>3</ordno>
</tok>
</s>
</DGAdoc>
"""


def _tokens(*surfaces):
    return tuple(make_token(s) for s in surfaces)


def test_read_token_only_listing():
    doc = read_dga_xml(TOKEN_ONLY_LISTING)
    assert len(doc.utterances) == 1
    utt = doc.utterances[0]
    assert [t.norm for t in utt.tokens] == ["put", "in", "there"]
    assert utt.structures == ()
    assert utt.decision.status is DecisionStatus.ACCEPTED


def test_read_empty_document():
    doc = read_dga_xml(b"<?xml version='1.0'?><DGAdoc></DGAdoc>")
    assert doc.utterances == ()


def test_read_listing_with_arcs():
    extended = TOKEN_ONLY_LISTING.replace(
        b"</s>", b'<dep head="2" dependent="3"/>\n<dep head="1" dependent="2"/>\n</s>'
    )
    doc = read_dga_xml(extended)
    (utt,) = doc.utterances
    (structure,) = utt.structures
    assert structure.members == frozenset({1, 2, 3})
    assert structure.arcs == frozenset(
        {DependencyArc(dep=3, head=2), DependencyArc(dep=2, head=1)}
    )
    assert structure.root == 1


def test_read_golden_annotation(peter7_doc):
    assert peter7_doc.corpus_id == "peter7"
    assert len(peter7_doc.utterances) == 6
    sizes = [s.size for u in peter7_doc.utterances for s in u.structures]
    assert sorted(sizes) == [2, 3, 3, 4]
    assert peter7_doc.utterances[2].decision.reason is RejectReason.UNTRANSCRIBED


def test_malformed_xml_is_fatal():
    with pytest.raises(DgaParseError):
        read_dga_xml(b"<DGAdoc><s></DGAdoc>")


def test_ordno_gap_names_sentence():
    bad = TOKEN_ONLY_LISTING.replace(b"<ordno>2</ordno>", b"<ordno>5</ordno>")
    with pytest.raises(DocumentValidationError) as err:
        read_dga_xml(bad)
    assert "sentence 1" in str(err.value)


def test_write_empty_document_is_skeleton():
    data = write_dga_xml(AnnotatedDocument(corpus_id=""))
    assert b"<DGAdoc>" in data
    assert read_dga_xml(data).utterances == ()


def test_write_matches_token_only_listing():
    doc = AnnotatedDocument(
        corpus_id="", utterances=(AnnotatedUtterance(tokens=_tokens("put", "in", "there")),)
    )
    written = write_dga_xml(doc)

    def shape(data):
        import xml.etree.ElementTree as ET

        root = ET.fromstring(data)
        return [
            (el.tag, (el.text or "").strip())
            for el in root.iter()
        ]

    assert shape(written) == shape(TOKEN_ONLY_LISTING)


def test_round_trip_three_structures():
    utt = AnnotatedUtterance(
        tokens=_tokens("look", "at", "in", "that", "now"),
        structures=(
            Structure(members=frozenset({1, 2, 4}), arcs=frozenset({
                DependencyArc(dep=4, head=2), DependencyArc(dep=2, head=1),
            })),
            Structure.single(3),
            Structure.single(5),
        ),
    )
    doc = AnnotatedDocument(corpus_id="demo", utterances=(utt,))
    assert read_dga_xml(write_dga_xml(doc)) == doc


def test_round_trip_decision_attributes():
    utt = AnnotatedUtterance(
        tokens=_tokens("xxx"),
        decision=AnnotationDecision(
            status=DecisionStatus.REJECTED, reason=RejectReason.UNTRANSCRIBED, note="unclear"
        ),
    )
    doc = AnnotatedDocument(corpus_id="demo", utterances=(utt,))
    assert read_dga_xml(write_dga_xml(doc)) == doc


@given(annotated_documents())
def test_round_trip_generated_documents(doc):
    assert read_dga_xml(write_dga_xml(doc)) == doc


@given(annotated_documents())
def test_structures_are_in_trees(doc):
    assert validate(doc) == []
    for utt in doc.utterances:
        for s in utt.structures:
            assert len(s.arcs) == len(s.members) - 1


def test_validate_self_loop():
    utt = AnnotatedUtterance(
        tokens=_tokens("a", "b"),
        structures=(
            Structure(members=frozenset({1, 2}), arcs=frozenset({DependencyArc(dep=1, head=1)})),
        ),
    )
    codes = {v.code for v in validate(AnnotatedDocument("x", (utt,)))}
    assert "self-loop" in codes


def test_validate_multiple_heads():
    utt = AnnotatedUtterance(
        tokens=_tokens("a", "b", "c"),
        structures=(
            Structure(
                members=frozenset({1, 2, 3}),
                arcs=frozenset({DependencyArc(dep=1, head=2), DependencyArc(dep=1, head=3)}),
            ),
        ),
    )
    codes = {v.code for v in validate(AnnotatedDocument("x", (utt,)))}
    assert "multiple-heads" in codes


def test_validate_cycle():
    utt = AnnotatedUtterance(
        tokens=_tokens("a", "b"),
        structures=(
            Structure(
                members=frozenset({1, 2}),
                arcs=frozenset({DependencyArc(dep=1, head=2), DependencyArc(dep=2, head=1)}),
            ),
        ),
    )
    codes = {v.code for v in validate(AnnotatedDocument("x", (utt,)))}
    assert "cycle" in codes


def test_validate_disconnected_structure():
    utt = AnnotatedUtterance(
        tokens=_tokens("a", "b", "c"),
        structures=(Structure(members=frozenset({1, 2, 3}), arcs=frozenset({DependencyArc(dep=1, head=2)})),),
    )
    codes = {v.code for v in validate(AnnotatedDocument("x", (utt,)))}
    assert "disconnected" in codes


def test_validate_overlapping_structures():
    utt = AnnotatedUtterance(
        tokens=_tokens("a", "b"),
        structures=(Structure.single(1), Structure.single(1)),
    )
    codes = {v.code for v in validate(AnnotatedDocument("x", (utt,)))}
    assert "overlapping-structures" in codes


def test_validate_rejection_needs_reason():
    utt = AnnotatedUtterance(
        tokens=_tokens("a"), decision=AnnotationDecision(status=DecisionStatus.REJECTED)
    )
    codes = {v.code for v in validate(AnnotatedDocument("x", (utt,)))}
    assert "missing-reason" in codes


def test_write_refuses_invalid_document():
    utt = AnnotatedUtterance(
        tokens=_tokens("a"), decision=AnnotationDecision(status=DecisionStatus.REJECTED)
    )
    with pytest.raises(DocumentValidationError):
        write_dga_xml(AnnotatedDocument("x", (utt,)))


def test_structures_from_arcs_groups_components():
    arcs = [
        DependencyArc(dep=2, head=1),
        DependencyArc(dep=4, head=5),
    ]
    structures = structures_from_arcs(arcs, singles=[7])
    assert [sorted(s.members) for s in structures] == [[1, 2], [4, 5], [7]]


def test_skeleton_document(peter7_utterances):
    doc = skeleton_document("peter7", peter7_utterances)
    assert len(doc.utterances) == 6
    assert all(u.structures == () for u in doc.utterances)
    assert validate(doc) == []
