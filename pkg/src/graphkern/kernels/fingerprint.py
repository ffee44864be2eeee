"""Path fingerprints and the Tanimoto, MinMax and Hybrid kernels.

Paths are walks with pairwise distinct edges (vertices may repeat), found by
depth-first search from every vertex.  A label sequence and its reverse are
the same feature; each undirected path is counted once.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..exceptions import FeatureExplosion
from ..graph import DEFAULT_EDGE_LABEL, LabeledGraph

DEFAULT_DEPTH = 10
FEATURE_CAP = 10_000_000

_MASK64 = (1 << 64) - 1
FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


@dataclass
class PathFeatureSet:
    features: Counter = field(default_factory=Counter)
    depth_d: int = DEFAULT_DEPTH
    mode: str = "counting"  # "counting" | "binary" | "hashed"
    vector_length_r: int | None = None
    bits_b: int | None = None
    bits: np.ndarray | None = None  # hashed mode only, bool array of length r

    def keys(self) -> set:
        if self.mode == "hashed":
            return set(np.flatnonzero(self.bits).tolist())
        return set(self.features)


def serialize(seq) -> str:
    return ",".join(str(x) for x in seq)


def canonical_key(seq) -> str:
    fwd, rev = serialize(seq), serialize(seq[::-1])
    return fwd if fwd <= rev else rev


def enumerate_labeled_paths(
    g: LabeledGraph,
    depth_d: int = DEFAULT_DEPTH,
    edge_divergence: bool = True,
    cap: int = FEATURE_CAP,
) -> PathFeatureSet:
    """Counting feature map over label sequences of paths with ``<= depth_d`` bonds.

    With ``edge_divergence`` on, a depth-first search never reuses an edge
    already explored by an earlier branch from the same start vertex.
    """
    if depth_d < 0:
        raise ValueError("depth_d must be non-negative")
    lab = g.vertex_labels
    found = set()  # undirected paths as canonical edge sequences
    counts = Counter()

    def record(vertices):
        if len(vertices) == 1:
            return
        fwd = tuple(vertices)
        key = min(fwd, fwd[::-1])
        if key in found:
            return
        found.add(key)
        seq = [lab[vertices[0]]]
        for a, b in zip(vertices, vertices[1:]):
            seq.append(g.edge_labels.get((a, b), DEFAULT_EDGE_LABEL))
            seq.append(lab[b])
        counts[canonical_key(seq)] += 1
        if len(counts) > cap:
            raise FeatureExplosion(f"more than {cap} path features in graph {g.name!r}")

    for start in range(g.vertex_count):
        counts[canonical_key([lab[start]])] += 1
        explored = set()
        stack_path = [start]
        used = set()

        def dfs(v, depth):
            if depth == depth_d:
                return
            for w, _ in g.out_edges[v]:
                e = (min(v, w), max(v, w))
                if e in used or (edge_divergence and e in explored):
                    continue
                explored.add(e)
                used.add(e)
                stack_path.append(w)
                record(stack_path)
                dfs(w, depth + 1)
                stack_path.pop()
                used.discard(e)

        dfs(start, 0)
    return PathFeatureSet(counts, depth_d, "counting")


def fnv1a64(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & _MASK64
    return h


def splitmix64(seed: int):
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def hash_indices(key: str, r: int, b: int) -> list:
    """``b`` bit positions in ``[0, r)`` for a canonical feature key."""
    gen = splitmix64(fnv1a64(key.encode("utf-8")))
    return [next(gen) % r for _ in range(b)]


def fingerprint(ps: PathFeatureSet, mode: str, r: int = 512, b: int = 1) -> PathFeatureSet:
    if mode == "counting":
        return PathFeatureSet(Counter(ps.features), ps.depth_d, "counting")
    if mode == "binary":
        return PathFeatureSet(Counter(dict.fromkeys(ps.features, 1)), ps.depth_d, "binary")
    if mode == "hashed":
        if r <= 0 or b not in (1, 4):
            raise ValueError("hashed mode needs r > 0 and b in {1, 4}")
        bits = np.zeros(r, dtype=bool)
        for key in ps.features:
            bits[hash_indices(key, r, b)] = True
        return PathFeatureSet(Counter(ps.features), ps.depth_d, "hashed", r, b, bits)
    raise ValueError(f"unknown fingerprint mode {mode!r}")


def _features(g, depth_d, edge_divergence=True):
    if isinstance(g, PathFeatureSet):
        return g
    return enumerate_labeled_paths(g, depth_d, edge_divergence)


def tanimoto_from_sets(a: set, b: set) -> float:
    inter = len(a & b)
    union = len(a) + len(b) - inter
    return inter / union if union else 0.0


def minmax_from_counts(x: Counter, y: Counter) -> float:
    lo = hi = 0
    for key in x.keys() | y.keys():
        lo += min(x[key], y[key])
        hi += max(x[key], y[key])
    return lo / hi if hi else 0.0


def tanimoto_kernel(g1, g2, depth_d: int = DEFAULT_DEPTH, edge_divergence: bool = True) -> float:
    return tanimoto_from_sets(
        _features(g1, depth_d, edge_divergence).keys(), _features(g2, depth_d, edge_divergence).keys()
    )


def minmax_kernel(g1, g2, depth_d: int = DEFAULT_DEPTH, edge_divergence: bool = True) -> float:
    return minmax_from_counts(
        _features(g1, depth_d, edge_divergence).features,
        _features(g2, depth_d, edge_divergence).features,
    )


def hashed_tanimoto(g1, g2, depth_d: int = DEFAULT_DEPTH, r: int = 512, b: int = 1) -> float:
    f1 = fingerprint(_features(g1, depth_d), "hashed", r, b)
    f2 = fingerprint(_features(g2, depth_d), "hashed", r, b)
    inter = int(np.count_nonzero(f1.bits & f2.bits))
    union = int(np.count_nonzero(f1.bits | f2.bits))
    return inter / union if union else 0.0


def hybrid_from_tanimoto(kt: float, c: float) -> float:
    if not -1 < c < 2:
        raise ValueError("c must lie in (-1, 2)")
    return ((2 - c) * kt + (1 + c) * (1 - kt)) / 3


def hybrid_kernel(g1, g2, depth_d: int = DEFAULT_DEPTH, r: int = 512, c: float = 0.5, b: int = 1) -> float:
    return hybrid_from_tanimoto(hashed_tanimoto(g1, g2, depth_d, r, b), c)
