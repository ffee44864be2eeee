"""Graph-to-graph transformations consumed by the kernels.

Floyd-Warshall distances, Morgan indices, the non-tottering expansion and
Weisfeiler-Lehman color refinement.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import DisconnectedGraph
from .graph import DEFAULT_EDGE_LABEL, LabeledGraph, adjacency_matrix


@dataclass(frozen=True, eq=False)
class FloydGraph:
    distance: np.ndarray
    vertex_labels: tuple


def floyd_transform(g: LabeledGraph) -> FloydGraph:
    """All-pairs hop distances by Floyd-Warshall, O(n^3)."""
    n = g.vertex_count
    dist = np.full((n, n), np.inf)
    for i, j in g.edges:
        dist[i, j] = 1.0
    np.fill_diagonal(dist, 0.0)
    for k in range(n):
        np.minimum(dist, dist[:, k, None] + dist[None, k, :], out=dist)
    if np.isinf(dist).any():
        i, j = np.argwhere(np.isinf(dist))[0]
        raise DisconnectedGraph(f"graph {g.name!r}: no path between vertices {i} and {j}")
    return FloydGraph(dist.astype(np.int64), g.vertex_labels)


def morgan_index(g: LabeledGraph, iterations: int) -> np.ndarray:
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    a = adjacency_matrix(g)
    m = np.ones(g.vertex_count, dtype=np.int64)
    for _ in range(iterations):
        m = a @ m
    return m


def morgan_relabel(g: LabeledGraph, iterations: int) -> LabeledGraph:
    """Replace each vertex label by ``(label, morgan index)``."""
    m = morgan_index(g, iterations)
    return g.with_vertex_labels([(lab, int(x)) for lab, x in zip(g.vertex_labels, m)])


def non_tottering_transform(g: LabeledGraph) -> LabeledGraph:
    """Expand ``g`` so that its walks are exactly the non-tottering walks of ``g``.

    Vertices ``0..n-1`` are the original vertices.  Each directed edge
    ``(u, v)`` (in sorted order) becomes vertex ``n + k`` carrying the label
    of ``v``.  Links are ``v -> (v, u)`` for every out-edge and
    ``(u, v) -> (v, w)`` whenever ``w != u``; a link inherits the label of
    the underlying edge.  The result is directed.
    """
    n = g.vertex_count
    arcs = g.sorted_edges()
    arc_index = {arc: n + k for k, arc in enumerate(arcs)}
    labels = list(g.vertex_labels) + [g.vertex_labels[v] for _, v in arcs]
    edges = {}
    for (u, v), node in arc_index.items():
        lab = g.edge_labels.get((u, v), DEFAULT_EDGE_LABEL)
        edges[(u, node)] = lab
        for w, wlab in g.out_edges[v]:
            if w != u:
                edges[(node, arc_index[(v, w)])] = wlab
    return LabeledGraph(len(labels), frozenset(edges), tuple(labels), edges, g.name, directed=True)


# --------------------------------------------------------------------------
# Weisfeiler-Lehman refinement
# --------------------------------------------------------------------------

ROOT = -1  # virtual parent of the level-0 colors when they come from labels


def _sorted_keys(items):
    try:
        return sorted(items)
    except TypeError:
        return sorted(items, key=repr)


@dataclass
class WlColorHierarchy:
    """Color tree built during refinement.

    ``parent[c]`` is the color a vertex had one level before it received
    color ``c``.  ``per_vertex_path[v]`` lists the colors of ``v`` at levels
    ``0..h``.
    """

    parent: dict
    per_vertex_path: list


@dataclass
class WlRefinement:
    labels: list  # one int array per level
    hierarchy: WlColorHierarchy

    @property
    def h(self) -> int:
        return len(self.labels) - 1


def wl_refine_many(graphs: Sequence[LabeledGraph], h: int, uniform_start: bool = False) -> list:
    """Refine all ``graphs`` jointly with one shared color dictionary.

    New colors are assigned level by level in sorted signature order, so the
    ids are reproducible and independent of graph order.  Colors are unique
    across levels.
    """
    if h < 0:
        raise ValueError("h must be non-negative")
    parent = {}
    next_color = 0
    if uniform_start:
        current = [np.zeros(g.vertex_count, dtype=np.int64) for g in graphs]
        parent[0] = None
        next_color = 1
    else:
        distinct = _sorted_keys({lab for g in graphs for lab in g.vertex_labels})
        code = {lab: c for c, lab in enumerate(distinct)}
        for c in code.values():
            parent[c] = ROOT
        next_color = len(code)
        current = [np.array([code[lab] for lab in g.vertex_labels], dtype=np.int64) for g in graphs]

    levels = [[c] for c in current]
    for _ in range(h):
        signatures = []
        for g, col in zip(graphs, current):
            signatures.append(
                [(int(col[v]), tuple(sorted(int(col[u]) for u in nb))) for v, nb in enumerate(g.neighbors)]
            )
        distinct = sorted({s for sig in signatures for s in sig})
        code = {s: next_color + k for k, s in enumerate(distinct)}
        for s, c in code.items():
            parent[c] = s[0]
        next_color += len(code)
        current = [np.array([code[s] for s in sig], dtype=np.int64) for sig in signatures]
        for lv, col in zip(levels, current):
            lv.append(col)

    out = []
    for g, lv in zip(graphs, levels):
        paths = [[int(lv[i][v]) for i in range(h + 1)] for v in range(g.vertex_count)]
        out.append(WlRefinement(lv, WlColorHierarchy(parent, paths)))
    return out


def wl_refine(g: LabeledGraph, h: int, uniform_start: bool = False) -> WlRefinement:
    return wl_refine_many([g], h, uniform_start)[0]
