"""Shortest-path kernel on Floyd-transformed graphs."""
from __future__ import annotations

from collections import Counter

import numpy as np

from ..graph import LabeledGraph
from ..transforms import FloydGraph, floyd_transform
from .baseline import histogram_dot


def shortest_path_histogram(g: LabeledGraph | FloydGraph) -> Counter:
    """Counts of ``(start label, hop distance, end label)`` over ordered pairs ``i != j``."""
    fg = g if isinstance(g, FloydGraph) else floyd_transform(g)
    lab = fg.vertex_labels
    n = len(lab)
    ii, jj = np.nonzero(~np.eye(n, dtype=bool))
    dist = fg.distance
    return Counter((lab[i], int(dist[i, j]), lab[j]) for i, j in zip(ii.tolist(), jj.tolist()))


def sp_kernel(g1: LabeledGraph, g2: LabeledGraph) -> int:
    # Dirac kernels on start label, distance and end label
    return histogram_dot(shortest_path_histogram(g1), shortest_path_histogram(g2))
