"""Network statistics and structure-size measures for corpus graphs.

All graph measures run on the undirected giant component: average
degree 2E/N, local clustering as the fraction of ordered neighbor
pairs that are themselves linked, average shortest-path length over
unordered pairs, the Poisson random-graph path-length baseline
D = 1 + log(N/z1)/log(z2/z1) with z1 the mean degree and z2 its square,
a small-world check (L close to the baseline and far below N), and the
Pearson degree correlation over edge endpoints. Structure sizes average
the member counts of annotated structures, counting isolated accepted
words as size 1.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .annotations import AnnotatedDocument, DecisionStatus
from .chat import TokenKind
from .graph import SyntaxGraph, giant_component, neighbor_map

DEFAULT_SMALLWORLD_TOL = 0.5

#: Operational reading of "path length much smaller than network size".
SMALLWORLD_SIZE_FRACTION = 0.1


def avg_degree(g: SyntaxGraph) -> float | None:
    """Mean undirected degree, 2E/N; None on an empty graph."""
    if not g.nodes:
        return None
    total = sum(len(nbrs) for nbrs in neighbor_map(g).values())
    return total / len(g.nodes)


def clustering_local(g: SyntaxGraph, node: str) -> float:
    """Fraction of ordered neighbor pairs of ``node`` that are linked.

    Degree-0 and degree-1 nodes have no neighbor pairs; their clustering
    is defined as 0 so tree-like graphs keep a defined average.
    """
    adj = neighbor_map(g)
    if node not in adj:
        raise ValueError(f"node {node!r} not in graph")
    nbrs = adj[node]
    k = len(nbrs)
    if k < 2:
        return 0.0
    linked = 0
    for a in nbrs:
        linked += sum(1 for b in nbrs if b != a and b in adj[a])
    return linked / (k * (k - 1))


def clustering_avg(g: SyntaxGraph) -> float | None:
    """Mean local clustering over all nodes; None on an empty graph."""
    if not g.nodes:
        return None
    nodes = sorted(g.nodes)
    return sum(clustering_local(g, w) for w in nodes) / len(nodes)


def path_length(g: SyntaxGraph) -> float:
    """Mean shortest-path length over unordered node pairs (BFS all-pairs).

    Raises ValueError on graphs with fewer than two nodes or on
    disconnected input: the caller passes the giant component.
    """
    n = len(g.nodes)
    if n < 2:
        raise ValueError("path length needs at least two nodes")
    adj = neighbor_map(g)
    total = 0
    for source in sorted(g.nodes):
        dist = {source: 0}
        queue = deque([source])
        while queue:
            cur = queue.popleft()
            for nxt in adj[cur]:
                if nxt not in dist:
                    dist[nxt] = dist[cur] + 1
                    queue.append(nxt)
        if len(dist) != n:
            raise ValueError("graph is disconnected; pass the giant component")
        total += sum(dist.values())
    return total / (n * (n - 1))


def poisson_baseline(n_nodes: int, z1: float, z2: float) -> float | None:
    """Random-graph path-length baseline 1 + log(N/z1)/log(z2/z1).

    Undefined (None) when z1 is not positive or branching does not grow
    (z2 <= z1).
    """
    if n_nodes < 1 or z1 <= 0 or z2 <= z1:
        return None
    return 1.0 + math.log(n_nodes / z1) / math.log(z2 / z1)


def small_world(
    path_len: float,
    d_random: float,
    n_nodes: int,
    tol: float = DEFAULT_SMALLWORLD_TOL,
) -> bool:
    """True when L is within tol of the random baseline and L << N."""
    return (
        abs(path_len - d_random) <= tol * d_random
        and path_len <= n_nodes * SMALLWORLD_SIZE_FRACTION
    )


def assortativity(g: SyntaxGraph) -> float | None:
    """Pearson correlation of degrees across edge endpoints.

    Accumulates the edge sums in exact integers and clears the 1/m
    normalization, so the degenerate case (all endpoint degrees equal,
    zero denominator) is detected exactly and reported as None.
    """
    m = len(g.edges)
    if m == 0:
        return None
    deg = {w: len(nbrs) for w, nbrs in neighbor_map(g).items()}
    s_prod = 0  # sum over edges of j*k
    s_sum = 0  # sum over edges of (j + k)
    s_sq = 0  # sum over edges of (j^2 + k^2)
    for a, b in sorted(g.edges):
        j, k = deg[a], deg[b]
        s_prod += j * k
        s_sum += j + k
        s_sq += j * j + k * k
    numerator = 4 * m * s_prod - s_sum * s_sum
    denominator = 2 * m * s_sq - s_sum * s_sum
    if denominator == 0:
        return None
    return numerator / denominator


def structure_sizes(docs: Iterable[AnnotatedDocument]) -> list[int]:
    """Sizes of all contributing structures, in document order.

    Accepted utterances contribute one size per structure; utterances
    decided as isolated words contribute size 1 per word token; rejected
    utterances contribute nothing.
    """
    sizes: list[int] = []
    for doc in docs:
        for utt in doc.utterances:
            status = utt.decision.status
            if status is DecisionStatus.REJECTED:
                continue
            if status is DecisionStatus.ISOLATED_WORDS:
                sizes.extend(1 for t in utt.tokens if t.kind is TokenKind.WORD)
                continue
            sizes.extend(s.size for s in utt.structures)
    return sizes


def avg_structure_size(docs: Iterable[AnnotatedDocument]) -> tuple[float | None, int]:
    """Mean structure size and the structure count; (None, 0) without structures."""
    sizes = structure_sizes(docs)
    if not sizes:
        return None, 0
    return sum(sizes) / len(sizes), len(sizes)


@dataclass(frozen=True)
class MetricsReport:
    """Per-corpus record of the full measure suite; None marks undefined."""

    corpus_id: str
    n_words: int
    gcc_size: int
    avg_degree: float | None
    clustering: float | None
    path_length: float | None
    poisson_d: float | None
    small_world: bool | None
    assortativity: float | None
    avg_structure_size: float | None
    structure_count: int
    age: str | None = None

    @property
    def z1(self) -> float | None:
        return self.avg_degree

    @property
    def z2(self) -> float | None:
        return None if self.avg_degree is None else self.avg_degree**2


#: Stable CSV column order for report serialization.
REPORT_COLUMNS = (
    "corpus_id",
    "N_w",
    "gcc_size",
    "avg_degree",
    "C",
    "L",
    "D_poisson",
    "small_world",
    "rho",
    "S_avg",
    "structure_count",
)


def report_to_dict(r: MetricsReport) -> dict:
    """JSON-ready report; adds the age, which the CSV columns omit."""
    return {
        "corpus_id": r.corpus_id,
        "age": r.age,
        "N_w": r.n_words,
        "gcc_size": r.gcc_size,
        "avg_degree": r.avg_degree,
        "C": r.clustering,
        "L": r.path_length,
        "D_poisson": r.poisson_d,
        "small_world": r.small_world,
        "rho": r.assortativity,
        "S_avg": r.avg_structure_size,
        "structure_count": r.structure_count,
    }


def report_from_dict(d: dict) -> MetricsReport:
    return MetricsReport(
        corpus_id=d["corpus_id"],
        n_words=d["N_w"],
        gcc_size=d["gcc_size"],
        avg_degree=d["avg_degree"],
        clustering=d["C"],
        path_length=d["L"],
        poisson_d=d["D_poisson"],
        small_world=d["small_world"],
        assortativity=d["rho"],
        avg_structure_size=d["S_avg"],
        structure_count=d["structure_count"],
        age=d.get("age"),
    )


def report_json_bytes(r: MetricsReport) -> bytes:
    return json.dumps(report_to_dict(r), indent=2).encode("utf-8")


def compute_report(
    corpus_id: str,
    g: SyntaxGraph,
    docs: Sequence[AnnotatedDocument],
    smallworld_tol: float = DEFAULT_SMALLWORLD_TOL,
    poisson_n: str = "gcc",
    age: str | None = None,
) -> MetricsReport:
    """Assemble the full report for one corpus graph and its documents.

    ``poisson_n`` selects the node count fed to the random baseline:
    "gcc" (the metric domain, default) or "all" (every word type).
    """
    if poisson_n not in ("gcc", "all"):
        raise ValueError(f"poisson_n must be 'gcc' or 'all', not {poisson_n!r}")
    gcc = giant_component(g)
    gcc_size = len(gcc.nodes)
    k = avg_degree(gcc)
    c = clustering_avg(gcc)
    length = path_length(gcc) if gcc_size >= 2 else None
    baseline_n = gcc_size if poisson_n == "gcc" else len(g.nodes)
    d_poisson = None if k is None else poisson_baseline(baseline_n, k, k * k)
    is_small = (
        small_world(length, d_poisson, baseline_n, smallworld_tol)
        if length is not None and d_poisson is not None
        else None
    )
    rho = assortativity(gcc)
    s_avg, s_count = avg_structure_size(docs)
    return MetricsReport(
        corpus_id=corpus_id,
        n_words=len(g.nodes),
        gcc_size=gcc_size,
        avg_degree=k,
        clustering=c,
        path_length=length,
        poisson_d=d_poisson,
        small_world=is_small,
        assortativity=rho,
        avg_structure_size=s_avg,
        structure_count=s_count,
        age=age,
    )
