"""Brute-force reference implementations, independent of the package code.

These deliberately take nothing but node/edge collections and recompute
every measure from the dense adjacency matrix (or exact rational
arithmetic), so they share no code path with the implementations they
check.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

import numpy as np


def _matrix(nodes: Iterable[str], edges: Iterable[tuple[str, str]]):
    order = sorted(nodes)
    index = {w: i for i, w in enumerate(order)}
    a = np.zeros((len(order), len(order)), dtype=np.int64)
    for u, v in edges:
        a[index[u], index[v]] = 1
        a[index[v], index[u]] = 1
    return order, a


def oracle_avg_degree(nodes, edges) -> float | None:
    order, a = _matrix(nodes, edges)
    if not order:
        return None
    return int(a.sum()) / len(order)


def oracle_clustering_local(nodes, edges, node) -> float:
    order, a = _matrix(nodes, edges)
    i = order.index(node)
    nbrs = np.flatnonzero(a[i])
    k = len(nbrs)
    if k < 2:
        return 0.0
    linked = int(a[np.ix_(nbrs, nbrs)].sum())
    return linked / (k * (k - 1))


def oracle_clustering_avg(nodes, edges) -> float | None:
    order, a = _matrix(nodes, edges)
    if not order:
        return None
    total = 0.0
    for i in range(len(order)):
        nbrs = np.flatnonzero(a[i])
        k = len(nbrs)
        if k < 2:
            continue
        total += int(a[np.ix_(nbrs, nbrs)].sum()) / (k * (k - 1))
    return total / len(order)


def oracle_path_length(nodes, edges) -> float:
    """All-pairs shortest paths by Floyd-Warshall on the dense matrix."""
    order, a = _matrix(nodes, edges)
    n = len(order)
    if n < 2:
        raise ValueError("need at least two nodes")
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    d[a == 1] = 1.0
    for k in range(n):
        d = np.minimum(d, d[:, k, None] + d[None, k, :])
    if np.isinf(d).any():
        raise ValueError("disconnected")
    return float(d.sum()) / (n * (n - 1))


def oracle_assortativity(nodes, edges) -> Fraction | None:
    """Literal evaluation of the endpoint-degree Pearson coefficient in
    exact rationals; None when the denominator vanishes."""
    edge_list = sorted(edges)
    m = len(edge_list)
    if m == 0:
        return None
    deg: dict[str, int] = {w: 0 for w in nodes}
    for u, v in edge_list:
        deg[u] += 1
        deg[v] += 1
    c = Fraction(1, m)
    s_prod = sum(Fraction(deg[u] * deg[v]) for u, v in edge_list)
    s_half_sum = sum(Fraction(deg[u] + deg[v], 2) for u, v in edge_list)
    s_half_sq = sum(Fraction(deg[u] ** 2 + deg[v] ** 2, 2) for u, v in edge_list)
    numerator = c * s_prod - (c * s_half_sum) ** 2
    denominator = c * s_half_sq - (c * s_half_sum) ** 2
    if denominator == 0:
        return None
    return numerator / denominator


def oracle_components(nodes, edges) -> list[frozenset[str]]:
    """Exhaustive union-find, largest component first (lexicographic ties)."""
    parent = {w: w for w in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict[str, set[str]] = {}
    for w in parent:
        groups.setdefault(find(w), set()).add(w)
    comps = [frozenset(g) for g in groups.values()]
    comps.sort(key=lambda c: (-len(c), tuple(sorted(c))))
    return comps
