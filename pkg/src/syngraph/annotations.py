"""Dependency-annotated utterances and the DGA XML interchange format.

A document is a sequence of utterances; each utterance carries its
tokens (order numbers start at 1), zero or more token-disjoint
dependency structures, and an accept/reject decision. Every structure
is a rooted in-tree: each member has at most one head, and a one-word
structure has no arcs.

The on-disk XML keeps the classic token layout (``s``/``tok``/``orth``/
``ordno``) and extends it with one ``dep`` element per arc (``head`` and
``dependent`` order numbers), one ``single`` element per one-word
structure, and decision attributes on ``s``. Token-only files read back
as undecided (accepted, no structures). UTF-8 is written; other
declared encodings (e.g. iso-8859-1) are honored on read.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence
from xml.sax.saxutils import escape, quoteattr

from .chat import RawUtterance, Token, TokenKind, make_token


class DgaParseError(ValueError):
    """Raised when XML input cannot be parsed into a document."""


class DocumentValidationError(ValueError):
    """Raised when a document (or XML content) violates model invariants."""

    def __init__(self, message: str, violations: Sequence["Violation"] = ()):
        super().__init__(message)
        self.violations = list(violations)


class DecisionStatus(Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    ISOLATED_WORDS = "isolated_words"


class RejectReason(Enum):
    ONOMATOPOEIA = "onomatopoeia"
    UNTRANSCRIBED = "untranscribed"
    IMITATION = "imitation"
    UNSTRUCTURED = "unstructured"
    LIST_SEQUENCE = "list_sequence"
    ATTENTION_VOCATIVE = "attention_vocative"
    AMBIGUOUS = "ambiguous"
    OTHER = "other"


@dataclass(frozen=True)
class AnnotationDecision:
    status: DecisionStatus = DecisionStatus.ACCEPTED
    reason: RejectReason | None = None
    note: str = ""


ACCEPT = AnnotationDecision()


@dataclass(frozen=True, order=True)
class DependencyArc:
    """Directed dependency link: ``dep`` (complement side) -> ``head``."""

    dep: int
    head: int


@dataclass(frozen=True)
class Structure:
    """A rooted in-tree over token positions of one utterance."""

    members: frozenset[int]
    arcs: frozenset[DependencyArc] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(self.members))
        object.__setattr__(self, "arcs", frozenset(self.arcs))

    @classmethod
    def single(cls, position: int) -> "Structure":
        return cls(members=frozenset({position}))

    @classmethod
    def from_arcs(cls, arcs: Iterable[DependencyArc]) -> "Structure":
        arcs = frozenset(arcs)
        members = frozenset(p for a in arcs for p in (a.dep, a.head))
        return cls(members=members, arcs=arcs)

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def root(self) -> int:
        """The member with no outgoing arc (assumes a valid structure)."""
        headed = {a.dep for a in self.arcs}
        roots = [m for m in self.members if m not in headed]
        if len(roots) != 1:
            raise DocumentValidationError(f"structure has {len(roots)} roots")
        return roots[0]


@dataclass(frozen=True)
class AnnotatedUtterance:
    """Tokens (ordno = index + 1), disjoint structures, and a decision.

    Structures are kept in canonical order (by smallest member) so that
    structurally equal utterances compare equal regardless of how their
    structures were listed.
    """

    tokens: tuple[Token, ...]
    structures: tuple[Structure, ...] = ()
    decision: AnnotationDecision = ACCEPT

    def __post_init__(self) -> None:
        object.__setattr__(self, "tokens", tuple(self.tokens))
        ordered = tuple(sorted(self.structures, key=lambda s: min(s.members, default=0)))
        object.__setattr__(self, "structures", ordered)

    def token_at(self, ordno: int) -> Token:
        return self.tokens[ordno - 1]


@dataclass(frozen=True)
class AnnotatedDocument:
    corpus_id: str
    utterances: tuple[AnnotatedUtterance, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "utterances", tuple(self.utterances))


@dataclass(frozen=True)
class Violation:
    utterance: int  # 1-based utterance index; 0 for document-level problems
    code: str
    detail: str


def _structure_violations(utt_index: int, s_index: int, s: Structure, n_tokens: int) -> list[Violation]:
    where = f"utterance {utt_index}, structure {s_index}"
    out: list[Violation] = []
    if not s.members:
        out.append(Violation(utt_index, "empty-structure", f"{where}: no members"))
        return out
    bad = [m for m in s.members if m < 1 or m > n_tokens]
    if bad:
        out.append(Violation(utt_index, "member-out-of-range", f"{where}: positions {sorted(bad)}"))
    for a in sorted(s.arcs):
        if a.dep == a.head:
            out.append(Violation(utt_index, "self-loop", f"{where}: arc {a.dep}->{a.head}"))
        if a.dep not in s.members or a.head not in s.members:
            out.append(
                Violation(utt_index, "arc-outside-members", f"{where}: arc {a.dep}->{a.head}")
            )
    heads: dict[int, list[int]] = {}
    for a in s.arcs:
        heads.setdefault(a.dep, []).append(a.head)
    for dep, hs in sorted(heads.items()):
        if len(hs) > 1:
            out.append(
                Violation(
                    utt_index, "multiple-heads", f"{where}: token {dep} has heads {sorted(hs)}"
                )
            )
    if len(s.members) == 1 and s.arcs:
        out.append(Violation(utt_index, "size-one-with-arcs", f"{where}"))
    if out:
        return out
    # Single-head arcs from here on: walk head pointers to detect cycles.
    head_of = {a.dep: a.head for a in s.arcs}
    for start in sorted(s.members):
        seen = {start}
        cur = start
        while cur in head_of:
            cur = head_of[cur]
            if cur in seen:
                out.append(Violation(utt_index, "cycle", f"{where}: through token {cur}"))
                return out
            seen.add(cur)
    roots = [m for m in sorted(s.members) if m not in head_of]
    if len(roots) != 1:
        out.append(
            Violation(
                utt_index,
                "disconnected",
                f"{where}: {len(roots)} arc-connected parts (roots {roots})",
            )
        )
    return out


def validate(doc: AnnotatedDocument) -> list[Violation]:
    """Return all model-invariant violations; empty list means valid."""
    out: list[Violation] = []
    for utt_index, utt in enumerate(doc.utterances, start=1):
        n = len(utt.tokens)
        claimed: set[int] = set()
        for s_index, s in enumerate(utt.structures, start=1):
            overlap = claimed & s.members
            if overlap:
                out.append(
                    Violation(
                        utt_index,
                        "overlapping-structures",
                        f"utterance {utt_index}: positions {sorted(overlap)} in two structures",
                    )
                )
            claimed |= s.members
            out.extend(_structure_violations(utt_index, s_index, s, n))
        d = utt.decision
        if d.status is DecisionStatus.REJECTED and d.reason is None:
            out.append(
                Violation(utt_index, "missing-reason", f"utterance {utt_index}: rejected without reason")
            )
    return out


def _components_of_arcs(arcs: Iterable[DependencyArc]) -> list[frozenset[int]]:
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    arcs = list(arcs)
    for a in arcs:
        for p in (a.dep, a.head):
            parent.setdefault(p, p)
    for a in arcs:
        ra, rb = find(a.dep), find(a.head)
        if ra != rb:
            parent[ra] = rb
    groups: dict[int, set[int]] = {}
    for p in parent:
        groups.setdefault(find(p), set()).add(p)
    return [frozenset(g) for g in groups.values()]


def structures_from_arcs(
    arcs: Iterable[DependencyArc], singles: Iterable[int] = ()
) -> tuple[Structure, ...]:
    """Group arcs into weakly-connected structures plus one-word structures."""
    arcs = list(arcs)
    structures = []
    for comp in _components_of_arcs(arcs):
        comp_arcs = frozenset(a for a in arcs if a.dep in comp)
        structures.append(Structure(members=comp, arcs=comp_arcs))
    structures.extend(Structure.single(p) for p in singles)
    return tuple(sorted(structures, key=lambda s: min(s.members)))


def skeleton_document(corpus_id: str, utterances: Sequence[RawUtterance]) -> AnnotatedDocument:
    """An unannotated document: tokens only, every utterance undecided."""
    return AnnotatedDocument(
        corpus_id=corpus_id,
        utterances=tuple(AnnotatedUtterance(tokens=u.tokens) for u in utterances),
    )


# --- XML ---------------------------------------------------------------


def read_dga_xml(data: bytes | str) -> AnnotatedDocument:
    """Parse DGA XML bytes into a validated document.

    Raises DgaParseError on malformed XML or unparseable numbers, and
    DocumentValidationError on ordno gaps/duplicates or invariant
    violations (naming the offending sentence).
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as e:
        raise DgaParseError(f"malformed XML: {e}") from None
    if root.tag != "DGAdoc":
        raise DgaParseError(f"expected DGAdoc root, found {root.tag!r}")
    corpus_id = root.get("corpus", "")
    utterances: list[AnnotatedUtterance] = []
    for s_index, s in enumerate(root.findall("s"), start=1):
        numbered: list[tuple[int, str]] = []
        for tok in s.findall("tok"):
            orth = (tok.findtext("orth") or "").strip()
            ordno_text = (tok.findtext("ordno") or "").strip()
            try:
                ordno = int(ordno_text)
            except ValueError:
                raise DgaParseError(
                    f"sentence {s_index}: bad ordno {ordno_text!r} for token {orth!r}"
                ) from None
            numbered.append((ordno, orth))
        ordnos = sorted(o for o, _ in numbered)
        if ordnos != list(range(1, len(numbered) + 1)):
            raise DocumentValidationError(
                f"sentence {s_index}: ordno values {ordnos} are not contiguous from 1"
            )
        tokens = tuple(make_token(orth) for _, orth in sorted(numbered))
        arcs: list[DependencyArc] = []
        for dep_el in s.findall("dep"):
            try:
                head = int(dep_el.get("head", ""))
                dependent = int(dep_el.get("dependent", ""))
            except ValueError:
                raise DgaParseError(f"sentence {s_index}: dep element with bad numbers") from None
            arcs.append(DependencyArc(dep=dependent, head=head))
        singles: list[int] = []
        for single_el in s.findall("single"):
            try:
                singles.append(int(single_el.get("ordno", "")))
            except ValueError:
                raise DgaParseError(f"sentence {s_index}: single element with bad ordno") from None
        status_text = s.get("status", DecisionStatus.ACCEPTED.value)
        try:
            status = DecisionStatus(status_text)
        except ValueError:
            raise DgaParseError(f"sentence {s_index}: unknown status {status_text!r}") from None
        reason_text = s.get("reason")
        try:
            reason = RejectReason(reason_text) if reason_text is not None else None
        except ValueError:
            raise DgaParseError(f"sentence {s_index}: unknown reason {reason_text!r}") from None
        utterances.append(
            AnnotatedUtterance(
                tokens=tokens,
                structures=structures_from_arcs(arcs, singles),
                decision=AnnotationDecision(status=status, reason=reason, note=s.get("note", "")),
            )
        )
    doc = AnnotatedDocument(corpus_id=corpus_id, utterances=tuple(utterances))
    violations = validate(doc)
    if violations:
        detail = "; ".join(f"[{v.code}] {v.detail}" for v in violations[:5])
        raise DocumentValidationError(f"invalid document: {detail}", violations)
    return doc


def write_dga_xml(doc: AnnotatedDocument) -> bytes:
    """Serialize a valid document; refuses invalid ones with diagnostics."""
    violations = validate(doc)
    if violations:
        detail = "; ".join(f"[{v.code}] {v.detail}" for v in violations[:5])
        raise DocumentValidationError(f"refusing to write invalid document: {detail}", violations)
    lines = ['<?xml version="1.0" encoding="utf-8"?>', '<!DOCTYPE DGAdoc SYSTEM "dga.dtd">']
    root_attr = f" corpus={quoteattr(doc.corpus_id)}" if doc.corpus_id else ""
    lines.append(f"<DGAdoc{root_attr}>")
    for utt in doc.utterances:
        attrs = ""
        d = utt.decision
        if d.status is not DecisionStatus.ACCEPTED:
            attrs += f" status={quoteattr(d.status.value)}"
        if d.reason is not None:
            attrs += f" reason={quoteattr(d.reason.value)}"
        if d.note:
            attrs += f" note={quoteattr(d.note)}"
        lines.append(f"<s{attrs}>")
        for i, tok in enumerate(utt.tokens, start=1):
            lines.append("  <tok>")
            lines.append(f"    <orth>{escape(tok.surface)}</orth>")
            lines.append(f"    <ordno>{i}</ordno>")
            lines.append("  </tok>")
        all_arcs = sorted(a for s in utt.structures for a in s.arcs)
        for a in all_arcs:
            lines.append(f'  <dep head="{a.head}" dependent="{a.dep}"/>')
        for s in utt.structures:
            if s.size == 1:
                lines.append(f'  <single ordno="{min(s.members)}"/>')
        lines.append("</s>")
    lines.append("</DGAdoc>")
    return ("\n".join(lines) + "\n").encode("utf-8")


# --- JSON mirror --------------------------------------------------------


def token_to_dict(tok: Token) -> dict:
    return {"surface": tok.surface, "norm": tok.norm, "kind": tok.kind.value}


def structure_to_dict(s: Structure) -> dict:
    return {
        "members": sorted(s.members),
        "arcs": [{"dep": a.dep, "head": a.head} for a in sorted(s.arcs)],
    }


def decision_to_dict(d: AnnotationDecision) -> dict:
    return {
        "status": d.status.value,
        "reason": d.reason.value if d.reason else None,
        "note": d.note,
    }


def document_to_dict(doc: AnnotatedDocument) -> dict:
    return {
        "corpus_id": doc.corpus_id,
        "utterances": [
            {
                "tokens": [token_to_dict(t) for t in u.tokens],
                "structures": [structure_to_dict(s) for s in u.structures],
                "decision": decision_to_dict(u.decision),
            }
            for u in doc.utterances
        ],
    }


def structure_from_dict(d: Mapping) -> Structure:
    return Structure(
        members=frozenset(int(m) for m in d.get("members", [])),
        arcs=frozenset(
            DependencyArc(dep=int(a["dep"]), head=int(a["head"])) for a in d.get("arcs", [])
        ),
    )


def decision_from_dict(d: Mapping) -> AnnotationDecision:
    reason = d.get("reason")
    return AnnotationDecision(
        status=DecisionStatus(d.get("status", "accepted")),
        reason=RejectReason(reason) if reason else None,
        note=d.get("note", "") or "",
    )


def document_from_dict(d: Mapping) -> AnnotatedDocument:
    utterances = []
    for u in d.get("utterances", []):
        tokens = tuple(
            Token(t["surface"], t["norm"], TokenKind(t["kind"])) for t in u.get("tokens", [])
        )
        utterances.append(
            AnnotatedUtterance(
                tokens=tokens,
                structures=tuple(structure_from_dict(s) for s in u.get("structures", [])),
                decision=decision_from_dict(u.get("decision", {})),
            )
        )
    return AnnotatedDocument(corpus_id=d.get("corpus_id", ""), utterances=tuple(utterances))
