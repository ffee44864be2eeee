"""Tree-pattern kernels with size-based or branching-based weights.

The value is computed by dynamic programming over vertex pairs: a pattern
rooted at ``(u, v)`` extends into every non-empty matching between the
neighbors of ``u`` and of ``v`` with equal edge labels.  Two pattern
embeddings that only differ by permuting identical sibling subtrees are
counted once, so the sum over tree types carries a ``1/|Aut(t)|`` factor.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..exceptions import DegreeOverflow
from ..graph import LabeledGraph
from ..transforms import non_tottering_transform


@dataclass(frozen=True)
class TreePatternConfig:
    depth_h: int = 2
    lam: float = 1.0
    variant: str = "size"  # "size" | "branch"
    tree_set: str = "balanced"  # "balanced" (B_h) | "up_to_depth" (T_h)
    no_tottering: bool = False
    branch_offset: int = 1  # branch(t) = leaves + branch_offset; -1 gives leaves - 1
    max_degree: int = 8

    def __post_init__(self):
        if self.depth_h < 1:
            raise ValueError("depth_h must be >= 1")
        if self.lam < 0:
            raise ValueError("lam must be non-negative")
        if self.variant not in ("size", "branch"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.tree_set not in ("balanced", "up_to_depth"):
            raise ValueError(f"unknown tree_set {self.tree_set!r}")
        if self.branch_offset not in (1, -1):
            raise ValueError("branch_offset must be +1 or -1")


def _matching_sum(weights, max_size=None):
    """Sum over non-empty matchings of the product of matched weights.

    ``weights`` is a list of rows; each row lists ``(column, weight)``.
    """
    if max_size == 1:
        return sum(w for row in weights for _, w in row)
    dp = {0: 1}
    for row in weights:
        if not row:
            continue
        nxt = dict(dp)
        for mask, val in dp.items():
            for col, w in row:
                bit = 1 << col
                if not mask & bit:
                    nxt[mask | bit] = nxt.get(mask | bit, 0) + val * w
        dp = nxt
    return sum(dp.values()) - 1


def _balanced_dp(g1, g2, roots1, roots2, depth, node_w, leaf_w, paths_only):
    lab1, lab2 = g1.vertex_labels, g2.vertex_labels
    # level 1: single labeled vertices (the leaves)
    k = {}
    for u in range(g1.vertex_count):
        for v in range(g2.vertex_count):
            if lab1[u] == lab2[v]:
                k[(u, v)] = node_w * leaf_w
    max_size = 1 if paths_only else None
    pairs = sorted(_label_pairs(g1, g2))
    for _ in range(depth - 1):
        nxt = {}
        for u, v in pairs:
            out_u, out_v = g1.out_edges[u], g2.out_edges[v]
            if not out_u or not out_v:
                continue
            rows = []
            for cu, eu in out_u:
                row = []
                for b, (cv, ev) in enumerate(out_v):
                    if eu == ev:
                        w = k.get((cu, cv))
                        if w:
                            row.append((b, w))
                rows.append(row)
            total = _matching_sum(rows, max_size)
            if total:
                nxt[(u, v)] = node_w * total
        k = nxt
    return sum(val for (u, v), val in k.items() if u in roots1 and v in roots2)


def _label_pairs(g1, g2):
    pairs = set()
    index = {}
    for v, lab in enumerate(g2.vertex_labels):
        index.setdefault(lab, []).append(v)
    for u, lab in enumerate(g1.vertex_labels):
        for v in index.get(lab, ()):
            pairs.add((u, v))
    return pairs


def _check_degree(g: LabeledGraph, cap: int):
    if g.vertex_count and int(g.degrees.max(initial=0)) > cap:
        raise DegreeOverflow(f"graph {g.name!r} has degree {int(g.degrees.max())} > {cap}")


def _balanced_kernel(g1, g2, roots1, roots2, depth, cfg: TreePatternConfig):
    lam = cfg.lam
    if cfg.variant == "size":
        # weight lam^(|t| - depth)
        if lam == 0:
            return _balanced_dp(g1, g2, roots1, roots2, depth, 1, 1, paths_only=True)
        return _balanced_dp(g1, g2, roots1, roots2, depth, lam, 1, False) / lam**depth
    # weight lam^(leaves + offset)
    if cfg.branch_offset == 1:
        return lam * _balanced_dp(g1, g2, roots1, roots2, depth, 1, lam, False)
    if lam == 0:
        return _balanced_dp(g1, g2, roots1, roots2, depth, 1, 1, paths_only=True)
    return _balanced_dp(g1, g2, roots1, roots2, depth, 1, lam, False) / lam


def tree_pattern_kernel(g1: LabeledGraph, g2: LabeledGraph, cfg: TreePatternConfig = TreePatternConfig()):
    _check_degree(g1, cfg.max_degree)
    _check_degree(g2, cfg.max_degree)
    roots1, roots2 = set(range(g1.vertex_count)), set(range(g2.vertex_count))
    if cfg.no_tottering:
        # roots stay on the original vertices of the expansion
        g1, g2 = non_tottering_transform(g1), non_tottering_transform(g2)
    if cfg.tree_set == "balanced":
        depths = [cfg.depth_h]
    else:
        depths = range(1, cfg.depth_h + 1)
    return sum(_balanced_kernel(g1, g2, roots1, roots2, d, cfg) for d in depths)
