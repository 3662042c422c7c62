"""Corpus-level syntactic graphs over word types.

Nodes are case-folded word forms; a directed edge dep -> head records
that the two types were syntactically related in at least one accepted
structure. Words and links appear once: rebuilding from duplicated
documents yields the identical graph. Arcs that would join two tokens
of the same word type are dropped (self-loops carry no information for
the type-level graph) and logged.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .annotations import AnnotatedDocument, DecisionStatus
from .chat import TokenKind

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SyntaxGraph:
    """Deduplicated word-type graph; undirected views store sorted pairs."""

    nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]
    directed: bool = True
    #: First-occurrence source per edge ("corpus_id:utterance_index").
    provenance: Mapping[tuple[str, str], str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "edges", frozenset(self.edges))
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if a not in self.nodes or b not in self.nodes:
                raise ValueError(f"edge ({a!r}, {b!r}) has an endpoint outside the node set")

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)


EMPTY_GRAPH = SyntaxGraph(frozenset(), frozenset())


def build_graph(docs: Iterable[AnnotatedDocument]) -> SyntaxGraph:
    """Accumulate the deduplicated word-type graph from annotated documents.

    Accepted utterances contribute their structure members as nodes and
    their arcs as edges; utterances decided as isolated words contribute
    their word tokens as nodes only; rejected utterances contribute
    nothing. Non-word tokens (xxx/yyy, the "0" line) never enter the
    graph.
    """
    nodes: set[str] = set()
    edges: dict[tuple[str, str], str] = {}
    for doc in docs:
        for utt_index, utt in enumerate(doc.utterances, start=1):
            source = f"{doc.corpus_id}:{utt_index}"
            status = utt.decision.status
            if status is DecisionStatus.REJECTED:
                continue
            if status is DecisionStatus.ISOLATED_WORDS:
                nodes.update(t.norm for t in utt.tokens if t.kind is TokenKind.WORD)
                continue
            for structure in utt.structures:
                ok_positions: set[int] = set()
                for pos in sorted(structure.members):
                    tok = utt.token_at(pos)
                    if tok.kind is not TokenKind.WORD:
                        log.warning("skipping non-word structure member %r at %s", tok.norm, source)
                        continue
                    ok_positions.add(pos)
                    nodes.add(tok.norm)
                for arc in sorted(structure.arcs):
                    if arc.dep not in ok_positions or arc.head not in ok_positions:
                        continue
                    dep_norm = utt.token_at(arc.dep).norm
                    head_norm = utt.token_at(arc.head).norm
                    if dep_norm == head_norm:
                        log.warning("dropping same-word arc on %r at %s", dep_norm, source)
                        continue
                    edges.setdefault((dep_norm, head_norm), source)
    return SyntaxGraph(
        nodes=frozenset(nodes),
        edges=frozenset(edges),
        directed=True,
        provenance=dict(edges),
    )


def undirected_view(g: SyntaxGraph) -> SyntaxGraph:
    """Collapse edge directions; opposite-direction pairs become one edge."""
    if not g.directed:
        return g
    und: dict[tuple[str, str], str] = {}
    for e in sorted(g.edges):
        key = (min(e), max(e))
        und.setdefault(key, g.provenance.get(e, ""))
    return SyntaxGraph(nodes=g.nodes, edges=frozenset(und), directed=False, provenance=und)


def neighbor_map(g: SyntaxGraph) -> dict[str, set[str]]:
    """Undirected adjacency sets over all nodes (isolates included)."""
    adj: dict[str, set[str]] = {w: set() for w in g.nodes}
    for a, b in g.edges:
        adj[a].add(b)
        adj[b].add(a)
    return adj


def components(g: SyntaxGraph) -> list[frozenset[str]]:
    """Weakly-connected components, largest first.

    Isolated nodes come back as singleton components. Equal-size ties
    order lexicographically so the giant component is deterministic.
    """
    adj = neighbor_map(g)
    unvisited = set(g.nodes)
    comps: list[frozenset[str]] = []
    while unvisited:
        start = min(unvisited)
        stack = [start]
        comp = {start}
        unvisited.discard(start)
        while stack:
            cur = stack.pop()
            for nxt in adj[cur]:
                if nxt in unvisited:
                    unvisited.discard(nxt)
                    comp.add(nxt)
                    stack.append(nxt)
        comps.append(frozenset(comp))
    comps.sort(key=lambda c: (-len(c), tuple(sorted(c))))
    return comps


def subgraph(g: SyntaxGraph, keep: Iterable[str]) -> SyntaxGraph:
    """The induced subgraph on ``keep``."""
    keep = frozenset(keep)
    missing = keep - g.nodes
    if missing:
        raise ValueError(f"nodes not in graph: {sorted(missing)}")
    edges = {e: s for e, s in sorted(g.provenance.items()) if e[0] in keep and e[1] in keep}
    kept_edges = frozenset(e for e in g.edges if e[0] in keep and e[1] in keep)
    return SyntaxGraph(nodes=keep, edges=kept_edges, directed=g.directed, provenance=edges)


def giant_component(g: SyntaxGraph) -> SyntaxGraph:
    """Undirected induced subgraph on the largest component (empty graph if no nodes)."""
    und = undirected_view(g)
    comps = components(und)
    if not comps:
        return SyntaxGraph(frozenset(), frozenset(), directed=False)
    return subgraph(und, comps[0])


@dataclass(frozen=True, eq=False)
class AdjacencyMatrix:
    """Dense 0/1 adjacency with a deterministic (lexicographic) index map."""

    nodes: tuple[str, ...]
    matrix: np.ndarray
    directed: bool

    @property
    def index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.nodes)}

    @property
    def n(self) -> int:
        return len(self.nodes)


def adjacency(g: SyntaxGraph, directed: bool = True) -> AdjacencyMatrix:
    """Build the adjacency matrix; the undirected form is symmetric."""
    if directed and not g.directed:
        raise ValueError("directed adjacency of an undirected view is not defined")
    nodes = tuple(sorted(g.nodes))
    index = {w: i for i, w in enumerate(nodes)}
    a = np.zeros((len(nodes), len(nodes)), dtype=int)
    for u, v in g.edges:
        i, j = index[u], index[v]
        a[i, j] = 1
        if not directed:
            a[j, i] = 1
    return AdjacencyMatrix(nodes=nodes, matrix=a, directed=directed)


def degree_map(g: SyntaxGraph) -> dict[str, int]:
    """Undirected degree per node."""
    return {w: len(nbrs) for w, nbrs in neighbor_map(g).items()}


def edge_list_text(g: SyntaxGraph) -> str:
    """Plain-text export: one "from TAB to" line per edge, then isolates."""
    lines = ["# edges (from\tto)"]
    connected: set[str] = set()
    for a, b in sorted(g.edges):
        lines.append(f"{a}\t{b}")
        connected.update((a, b))
    lines.append("# isolated nodes")
    for w in sorted(g.nodes - connected):
        lines.append(w)
    return "\n".join(lines) + "\n"


def graph_to_dict(g: SyntaxGraph) -> dict:
    """JSON-ready export with directed degree sequences for completeness."""
    out: dict = {
        "directed": g.directed,
        "nodes": sorted(g.nodes),
        "edges": [list(e) for e in sorted(g.edges)],
    }
    if g.directed:
        in_deg = {w: 0 for w in sorted(g.nodes)}
        out_deg = {w: 0 for w in sorted(g.nodes)}
        for a, b in sorted(g.edges):
            out_deg[a] += 1
            in_deg[b] += 1
        out["in_degree"] = in_deg
        out["out_degree"] = out_deg
    else:
        out["degree"] = {w: d for w, d in sorted(degree_map(g).items())}
    return out
