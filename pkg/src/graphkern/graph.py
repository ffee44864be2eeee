"""Labeled graphs and the label-matched direct product."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

DEFAULT_EDGE_LABEL = 0


@dataclass(frozen=True)
class LabeledGraph:
    """Immutable labeled graph.

    Edges are ordered vertex pairs.  An undirected bond ``i - j`` is stored as
    both ``(i, j)`` and ``(j, i)``, so ``len(edges)`` is the directed edge count.
    ``directed=True`` is reserved for derived graphs such as the
    non-tottering expansion; chemical inputs are always undirected.
    """

    vertex_count: int
    edges: frozenset
    vertex_labels: tuple
    edge_labels: Mapping = field(default_factory=dict)
    name: str | None = None
    directed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(self.edges))
        object.__setattr__(self, "vertex_labels", tuple(self.vertex_labels))
        object.__setattr__(self, "edge_labels", MappingProxyType(dict(self.edge_labels)))

    __hash__ = None

    def __reduce__(self):
        # MappingProxyType does not pickle; rebuild from a plain dict
        return (
            type(self),
            (self.vertex_count, self.edges, self.vertex_labels, dict(self.edge_labels), self.name, self.directed),
        )

    @classmethod
    def from_bonds(
        cls,
        vertex_labels: Sequence[Hashable],
        bonds: Iterable[tuple] = (),
        name: str | None = None,
    ) -> "LabeledGraph":
        """Build an undirected graph from ``(i, j)`` or ``(i, j, label)`` bonds."""
        edges = set()
        labels = {}
        for bond in bonds:
            i, j = int(bond[0]), int(bond[1])
            lab = bond[2] if len(bond) > 2 else DEFAULT_EDGE_LABEL
            edges.add((i, j))
            edges.add((j, i))
            labels[(i, j)] = lab
            labels[(j, i)] = lab
        return cls(len(vertex_labels), frozenset(edges), tuple(vertex_labels), labels, name)

    def with_vertex_labels(self, labels: Sequence[Hashable]) -> "LabeledGraph":
        if len(labels) != self.vertex_count:
            raise ValueError("label array length does not match vertex count")
        return LabeledGraph(
            self.vertex_count, self.edges, tuple(labels), self.edge_labels, self.name, self.directed
        )

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def out_edges(self) -> tuple:
        """Per vertex, the sorted tuple of ``(target, edge_label)``."""
        out = [[] for _ in range(self.vertex_count)]
        for i, j in self.edges:
            out[i].append((j, self.edge_labels.get((i, j), DEFAULT_EDGE_LABEL)))
        return tuple(tuple(sorted(o, key=lambda t: t[0])) for o in out)

    @cached_property
    def neighbors(self) -> tuple:
        return tuple(tuple(j for j, _ in o) for o in self.out_edges)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([len(o) for o in self.out_edges], dtype=np.int64)

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return f"LabeledGraph(name={self.name!r}, n={self.vertex_count}, m={self.edge_count}, {kind})"


@dataclass
class ValidationReport:
    violations: list

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.passed


def validate_graph(g: LabeledGraph) -> ValidationReport:
    """Check the structural invariants of ``g`` and report every violation found."""
    violations = []
    n = g.vertex_count
    if len(g.vertex_labels) != n:
        violations.append("label count mismatch")
    for i, j in sorted(g.edges):
        if not (0 <= i < n and 0 <= j < n):
            violations.append(f"dangling index: ({i}, {j})")
            continue
        if i == j:
            violations.append(f"self-loop: ({i}, {i})")
        if (i, j) not in g.edge_labels:
            violations.append(f"missing edge label: ({i}, {j})")
        if not g.directed:
            if (j, i) not in g.edges:
                violations.append(f"asymmetric edge: ({i}, {j})")
            elif g.edge_labels.get((i, j)) != g.edge_labels.get((j, i)):
                violations.append(f"asymmetric edge label: ({i}, {j})")
    return ValidationReport(violations)


def adjacency_matrix(g: LabeledGraph) -> np.ndarray:
    a = np.zeros((g.vertex_count, g.vertex_count), dtype=np.int64)
    for i, j in g.edges:
        a[i, j] = 1
    return a


@dataclass(frozen=True, eq=False)
class DirectProductGraph:
    """Label-matched direct product of two graphs.

    ``vertices[k]`` is the factor pair ``(i1, i2)`` for product vertex ``k``;
    pairs are sorted lexicographically.
    """

    vertices: list
    adjacency_sparse: sp.csr_matrix
    factor_refs: tuple = (None, None)

    @property
    def adjacency(self) -> np.ndarray:
        return self.adjacency_sparse.toarray()

    @property
    def size(self) -> int:
        return len(self.vertices)

    def max_degree(self) -> int:
        if self.size == 0:
            return 0
        return int(max(self.adjacency_sparse.sum(axis=1).max(), self.adjacency_sparse.sum(axis=0).max()))


def _edges_by_signature(g: LabeledGraph) -> dict:
    groups = defaultdict(list)
    lab = g.vertex_labels
    for i, j in g.edges:
        groups[(lab[i], g.edge_labels.get((i, j), DEFAULT_EDGE_LABEL), lab[j])].append((i, j))
    return groups


def direct_product(g1: LabeledGraph, g2: LabeledGraph) -> DirectProductGraph:
    n2 = g2.vertex_count
    by_label = defaultdict(list)
    for j, lab in enumerate(g2.vertex_labels):
        by_label[lab].append(j)
    vertices = []
    index = {}
    for i, lab in enumerate(g1.vertex_labels):
        for j in by_label.get(lab, ()):
            index[i * n2 + j] = len(vertices)
            vertices.append((i, j))
    size = len(vertices)

    rows, cols = [], []
    sig2 = _edges_by_signature(g2)
    for key, e1 in _edges_by_signature(g1).items():
        e2 = sig2.get(key)
        if not e2:
            continue
        for a, b in e1:
            for c, d in e2:
                rows.append(index[a * n2 + c])
                cols.append(index[b * n2 + d])
    adj = sp.csr_matrix(
        (np.ones(len(rows)), (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))),
        shape=(size, size),
    )
    return DirectProductGraph(vertices, adj, (g1.name, g2.name))
