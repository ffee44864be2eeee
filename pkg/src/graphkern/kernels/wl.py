"""Weisfeiler-Lehman kernels and the WL optimal assignment kernel."""
from __future__ import annotations

from collections import Counter
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from ..exceptions import DimensionMismatch
from ..graph import LabeledGraph
from ..transforms import wl_refine_many
from .baseline import eh_kernel, histogram_dot, vh_kernel
from .path import sp_kernel

BASE_KERNELS = {"vh": vh_kernel, "eh": eh_kernel, "sp": sp_kernel}


def wl_graphs(graphs: Sequence[LabeledGraph], h: int) -> list:
    """``out[i][g]`` is graph ``g`` relabeled with its level-``i`` WL colors."""
    refined = wl_refine_many(graphs, h)
    return [[g.with_vertex_labels(r.labels[i].tolist()) for g, r in zip(graphs, refined)] for i in range(h + 1)]


def wl_kernel(g1: LabeledGraph, g2: LabeledGraph, h: int, base: str = "vh"):
    try:
        k = BASE_KERNELS[base]
    except KeyError:
        raise ValueError(f"unknown WL base kernel {base!r}") from None
    return sum(k(a, b) for a, b in wl_graphs([g1, g2], h))


def wl_histogram(refinement, upto: int | None = None) -> Counter:
    """Color counts over levels ``0..upto`` (all levels by default)."""
    levels = refinement.labels if upto is None else refinement.labels[: upto + 1]
    counts = Counter()
    for col in levels:
        counts.update(col.tolist())
    return counts


def wls_kernel(g1: LabeledGraph, g2: LabeledGraph, h: int) -> int:
    r1, r2 = wl_refine_many([g1, g2], h)
    return histogram_dot(wl_histogram(r1), wl_histogram(r2))


def histogram_intersection(x, y) -> float:
    x, y = np.asarray(x), np.asarray(y)
    if x.shape != y.shape:
        raise DimensionMismatch(f"histogram shapes differ: {x.shape} vs {y.shape}")
    return np.minimum(x, y).sum().item()


def _intersect(x: Counter, y: Counter) -> int:
    if len(x) > len(y):
        x, y = y, x
    return sum(min(c, y[k]) for k, c in x.items() if k in y)


def wloa_kernel(g1: LabeledGraph, g2: LabeledGraph, h: int, uniform_start: bool = False) -> int:
    """Histogram intersection of the WL color-hierarchy histograms.

    ``uniform_start=True`` gives every vertex the same initial color and so
    ignores the input labels.
    """
    r1, r2 = wl_refine_many([g1, g2], h, uniform_start)
    return _intersect(wl_histogram(r1), wl_histogram(r2))


def wl_feature_matrix(graphs: Sequence[LabeledGraph], h: int, uniform_start: bool = False) -> sp.csr_matrix:
    """Explicit WL feature vectors (one row per graph) for global Gram assembly."""
    refined = wl_refine_many(graphs, h, uniform_start)
    rows, cols, vals = [], [], []
    for i, r in enumerate(refined):
        for color, count in sorted(wl_histogram(r).items()):
            rows.append(i)
            cols.append(color)
            vals.append(count)
    width = 1 + max(cols, default=-1)
    return sp.csr_matrix((vals, (rows, cols)), shape=(len(graphs), width), dtype=np.int64)


def wls_gram(graphs: Sequence[LabeledGraph], h: int) -> np.ndarray:
    x = wl_feature_matrix(graphs, h)
    return (x @ x.T).toarray().astype(float)


def wloa_gram(graphs: Sequence[LabeledGraph], h: int, uniform_start: bool = False) -> np.ndarray:
    x = wl_feature_matrix(graphs, h, uniform_start).toarray()
    n = len(graphs)
    out = np.empty((n, n))
    for i in range(n):
        out[i, i:] = np.minimum(x[i], x[i:]).sum(axis=1)
        out[i:, i] = out[i, i:]
    return out
