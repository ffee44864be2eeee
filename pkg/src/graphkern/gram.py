"""Gram matrix assembly, kernel metric, graph RBF, scaling and PSD checks."""
from __future__ import annotations

import math
import warnings
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exceptions import DegenerateRange, GraphKernelError
from .graph import LabeledGraph
from .kernels import baseline, fingerprint, path, tree, walk, wl

PSD_TOL = 1e-8


@dataclass
class GramMatrix:
    values: np.ndarray
    graph_ids: list
    kernel_descriptor: dict = field(default_factory=dict)
    scaling: dict | None = None

    @property
    def size(self) -> int:
        return self.values.shape[0]

    def submatrix(self, rows, cols=None) -> np.ndarray:
        cols = rows if cols is None else cols
        return self.values[np.ix_(rows, cols)]


# --------------------------------------------------------------------------
# kernel metric and RBF composition
# --------------------------------------------------------------------------

RBF_SIGMA_GRID = tuple(2.0**e for e in range(-7, 8))


@dataclass(frozen=True)
class RbfConfig:
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")


def squared_kernel_distance(k11, k12, k22):
    return k11 - 2.0 * k12 + k22


def kernel_metric(k11: float, k12: float, k22: float) -> float:
    # a negative radicand can only come from rounding
    return math.sqrt(max(0.0, squared_kernel_distance(k11, k12, k22)))


def graph_rbf(base_k11: float, base_k12: float, base_k22: float, sigma: float) -> float:
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    return math.exp(-squared_kernel_distance(base_k11, base_k12, base_k22) / (2.0 * sigma**2))


def rbf_values(values: np.ndarray, sigma: float) -> np.ndarray:
    """Compose a square base Gram matrix with the graph RBF kernel."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    d = np.diag(values)
    d2 = d[:, None] - 2.0 * values + d[None, :]
    return np.exp(-d2 / (2.0 * sigma**2))


# --------------------------------------------------------------------------
# scaling and PSD check
# --------------------------------------------------------------------------


def scale_gram(m: GramMatrix) -> GramMatrix:
    """Affine map of the entries onto ``[0, 1]`` using this matrix's min and max."""
    lo, hi = float(m.values.min()), float(m.values.max())
    scaling = {"kind": "minmax", "lo": lo, "hi": hi}
    return GramMatrix(apply_scaling(m.values, scaling), list(m.graph_ids), dict(m.kernel_descriptor), scaling)


def apply_scaling(values: np.ndarray, scaling: dict | None) -> np.ndarray:
    """Apply stored scaling parameters, e.g. to test rows against a training fit."""
    if not scaling:
        return np.asarray(values, dtype=float)
    lo, hi = scaling["lo"], scaling["hi"]
    if hi == lo:
        warnings.warn("Gram matrix has zero range; scaled to all zeros", DegenerateRange, stacklevel=2)
        return np.zeros_like(values, dtype=float)
    return (np.asarray(values, dtype=float) - lo) / (hi - lo)


@dataclass
class PsdReport:
    min_eigenvalue: float
    max_eigenvalue: float
    passed: bool


def check_psd(m, tol: float = PSD_TOL) -> PsdReport:
    values = m.values if isinstance(m, GramMatrix) else np.asarray(m, dtype=float)
    evals = np.linalg.eigvalsh((values + values.T) / 2.0)
    lo, hi = float(evals[0]), float(evals[-1])
    return PsdReport(lo, hi, lo >= -tol * max(1.0, hi))


# --------------------------------------------------------------------------
# Gram assembly
# --------------------------------------------------------------------------


def _vertex_signatures(g: LabeledGraph):
    lab = g.vertex_labels
    for u, out in enumerate(g.out_edges):
        yield lab[u], frozenset(Counter((e, lab[v]) for v, e in out).items())


def max_product_degree(graphs: Sequence[LabeledGraph]) -> int:
    """Largest vertex degree of any direct product over pairs drawn from ``graphs``."""
    sigs = {}
    for g in graphs:
        for lab, sig in _vertex_signatures(g):
            sigs.setdefault(lab, set()).add(sig)
    best = 0
    for group in sigs.values():
        group = [dict(s) for s in group]
        for a in group:
            for b in group:
                best = max(best, sum(c * b.get(k, 0) for k, c in a.items()))
    return best


def _resolve(graphs, desc: dict) -> dict:
    desc = dict(desc)
    if desc["kernel"] == "grw" and "gamma" not in desc:
        frac = desc.get("gamma_frac", 0.5)
        deg = max_product_degree(graphs)
        desc["gamma"] = frac / deg if deg else frac
        desc["max_product_degree"] = deg
    if desc["kernel"] == "nstep" and "weights" not in desc:
        desc["weights"] = [1.0] * (int(desc.get("steps", 3)) + 1)
    return desc


def _tree_config(desc):
    return tree.TreePatternConfig(
        depth_h=int(desc.get("h", 2)),
        lam=float(desc.get("lambda", 1.0)),
        variant=desc.get("variant", "size"),
        tree_set=desc.get("tree_set", "balanced"),
        no_tottering=bool(desc.get("no_tottering", False)),
        branch_offset=int(desc.get("branch_offset", 1)),
        max_degree=int(desc.get("max_degree", 8)),
    )


def _pair_function(desc: dict) -> Callable:
    kind = desc["kernel"]
    if kind == "veh":
        return baseline.veh_kernel
    if kind == "grw":
        return lambda a, b: walk.grw_kernel(a, b, desc["gamma"])
    if kind == "exp":
        return lambda a, b: walk.exp_walk_kernel(a, b, float(desc.get("beta", 1.0)))
    if kind == "nstep":
        return lambda a, b: walk.nstep_kernel(a, b, desc["weights"])
    if kind == "marginalized":
        return lambda a, b: walk.marginalized_kernel(a, b, float(desc.get("stop_prob", 0.1)))
    if kind == "marginalized_nt":
        return lambda a, b: walk.marginalized_nt_kernel(
            a, b, float(desc.get("stop_prob", 0.1)), int(desc.get("morgan", 0))
        )
    if kind == "tree":
        cfg = _tree_config(desc)
        return lambda a, b: tree.tree_pattern_kernel(a, b, cfg)
    if kind == "wl":
        return lambda a, b: wl.wl_kernel(a, b, int(desc.get("h", 3)), desc.get("base", "vh"))
    raise ValueError(f"unknown kernel id {kind!r}")


def _feature_function(desc: dict):
    """Per-graph feature map plus pair function for explicit kernels, else None."""
    kind = desc["kernel"]
    depth = int(desc.get("depth", fingerprint.DEFAULT_DEPTH))
    div = bool(desc.get("edge_divergence", True))
    if kind == "vh":
        return baseline.vertex_histogram, baseline.histogram_dot
    if kind == "eh":
        return baseline.edge_histogram, baseline.histogram_dot
    if kind == "sp":
        return path.shortest_path_histogram, baseline.histogram_dot
    if kind == "tanimoto":
        return (lambda g: fingerprint.enumerate_labeled_paths(g, depth, div).keys()), fingerprint.tanimoto_from_sets
    if kind == "minmax":
        return (
            lambda g: fingerprint.enumerate_labeled_paths(g, depth, div).features
        ), fingerprint.minmax_from_counts
    if kind == "hybrid":
        r, b, c = int(desc.get("r", 512)), int(desc.get("bits", 1)), float(desc.get("c", 0.5))

        def feat(g):
            return fingerprint.fingerprint(fingerprint.enumerate_labeled_paths(g, depth, div), "hashed", r, b).bits

        def pair(x, y):
            union = np.count_nonzero(x | y)
            kt = np.count_nonzero(x & y) / union if union else 0.0
            return fingerprint.hybrid_from_tanimoto(kt, c)

        return feat, pair
    return None


KERNEL_IDS = (
    "vh", "eh", "veh", "grw", "exp", "nstep", "marginalized", "marginalized_nt",
    "sp", "tree", "tanimoto", "minmax", "hybrid", "wl", "wls", "wloa",
)


def _labelled_error(exc, a, b):
    msg = f"pair ({a.name!r}, {b.name!r}): {exc}"
    try:
        new = type(exc)(msg)
    except TypeError:
        return exc
    new.__cause__ = exc
    return new


def _eval_chunk(args):
    graphs, desc, pairs = args
    fn = _pair_function(desc)
    out = []
    for i, j in pairs:
        try:
            out.append(fn(graphs[i], graphs[j]))
        except GraphKernelError as exc:
            raise _labelled_error(exc, graphs[i], graphs[j]) from exc
    return out


def compute_gram(graphs: Sequence[LabeledGraph], kernel_descriptor: dict, n_jobs: int = 1) -> GramMatrix:
    """Evaluate the kernel on every unordered pair once and mirror.

    ``kernel_descriptor`` holds ``kernel`` (one of ``KERNEL_IDS``) and its
    parameters; ``rbf_sigma`` composes the result with the graph RBF kernel.
    """
    graphs = list(graphs)
    desc = _resolve(graphs, kernel_descriptor)
    kind = desc["kernel"]
    if kind not in KERNEL_IDS:
        raise ValueError(f"unknown kernel id {kind!r}")
    n = len(graphs)
    ids = [g.name if g.name is not None else str(i) for i, g in enumerate(graphs)]

    if kind == "wls":
        values = wl.wls_gram(graphs, int(desc.get("h", 3)))
    elif kind == "wloa":
        values = wl.wloa_gram(graphs, int(desc.get("h", 3)), bool(desc.get("uniform_start", False)))
    elif (ff := _feature_function(desc)) is not None:
        feat, pair = ff
        feats = []
        for g in graphs:
            try:
                feats.append(feat(g))
            except GraphKernelError as exc:
                raise _labelled_error(exc, g, g) from exc
        values = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                values[i, j] = values[j, i] = pair(feats[i], feats[j])
    else:
        pairs = [(i, j) for i in range(n) for j in range(i, n)]
        if n_jobs > 1 and len(pairs) > 1:
            chunks = [pairs[k::n_jobs] for k in range(n_jobs)]
            with ProcessPoolExecutor(n_jobs) as pool:
                results = list(pool.map(_eval_chunk, [(graphs, desc, c) for c in chunks]))
            flat = {p: v for c, r in zip(chunks, results) for p, v in zip(c, r)}
            vals = [flat[p] for p in pairs]
        else:
            vals = _eval_chunk((graphs, desc, pairs))
        values = np.empty((n, n))
        for (i, j), v in zip(pairs, vals):
            values[i, j] = values[j, i] = v

    if desc.get("rbf_sigma") is not None:
        values = rbf_values(values, float(desc["rbf_sigma"]))
    return GramMatrix(np.asarray(values, dtype=float), ids, desc)
