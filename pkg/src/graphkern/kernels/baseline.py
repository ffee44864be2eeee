"""Vertex, edge and vertex-edge label histogram kernels."""
from __future__ import annotations

from collections import Counter

from ..graph import DEFAULT_EDGE_LABEL, LabeledGraph, direct_product


def vertex_histogram(g: LabeledGraph) -> Counter:
    return Counter(g.vertex_labels)


def edge_histogram(g: LabeledGraph) -> Counter:
    """Counts of ``(start label, edge label, end label)`` over directed edges."""
    lab = g.vertex_labels
    return Counter(
        (lab[i], g.edge_labels.get((i, j), DEFAULT_EDGE_LABEL), lab[j]) for i, j in g.edges
    )


def histogram_dot(x: Counter, y: Counter) -> int:
    if len(x) > len(y):
        x, y = y, x
    return sum(c * y[k] for k, c in x.items() if k in y)


def vh_kernel(g1: LabeledGraph, g2: LabeledGraph) -> int:
    return histogram_dot(vertex_histogram(g1), vertex_histogram(g2))


def eh_kernel(g1: LabeledGraph, g2: LabeledGraph) -> int:
    return histogram_dot(edge_histogram(g1), edge_histogram(g2))


def veh_kernel(g1: LabeledGraph, g2: LabeledGraph) -> int:
    """Entry sum of the direct-product adjacency: matched length-one walks."""
    prod = direct_product(g1, g2)
    return int(prod.adjacency_sparse.sum())
