"""Fixture corpus of small labeled graphs (at most five vertices)."""
from __future__ import annotations

from itertools import combinations, permutations

from graphkern.graph import LabeledGraph


def _connected(n, edges):
    if n == 0:
        return False
    seen, stack = {0}, [0]
    while stack:
        v = stack.pop()
        for a, b in edges:
            for x, y in ((a, b), (b, a)):
                if x == v and y not in seen:
                    seen.add(y)
                    stack.append(y)
    return len(seen) == n


def connected_shapes(n: int) -> list:
    """One edge list per isomorphism class of connected graphs on ``n`` vertices."""
    pairs = list(combinations(range(n), 2))
    classes = {}
    for mask in range(1 << len(pairs)):
        edges = [p for k, p in enumerate(pairs) if mask >> k & 1]
        if not _connected(n, edges):
            continue
        key = min(
            tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges)) for perm in permutations(range(n))
        )
        classes.setdefault(key, edges)
    return [classes[k] for k in sorted(classes)]


FIVE_VERTEX = {
    "path5": [(0, 1), (1, 2), (2, 3), (3, 4)],
    "star5": [(0, 1), (0, 2), (0, 3), (0, 4)],
    "cycle5": [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)],
    "house": [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (3, 4)],
    "k4_pendant": [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)],
}


def corpus() -> list:
    """Connected shapes on 1..4 vertices, two labelings each, plus five 5-vertex graphs."""
    out = []
    for n in range(1, 5):
        for k, edges in enumerate(connected_shapes(n)):
            out.append(LabeledGraph.from_bonds(["C"] * n, edges, f"s{n}_{k}_uniform"))
            labels = ["C" if v % 2 == 0 else "O" for v in range(n)]
            bonds = [(a, b, 1 + (a + b) % 2) for a, b in edges]
            out.append(LabeledGraph.from_bonds(labels, bonds, f"s{n}_{k}_mixed"))
    for name, edges in FIVE_VERTEX.items():
        labels = ["C", "N", "C", "C", "O"]
        out.append(LabeledGraph.from_bonds(labels, [(a, b, 1 + (a * b) % 2) for a, b in edges], name))
    return out
