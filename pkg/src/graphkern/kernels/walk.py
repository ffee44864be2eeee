"""Random-walk kernels on the direct product graph.

The geometric, exponential and N-step kernels sum weighted powers of the
product adjacency.  The marginalized kernel sums walk-pair probabilities of
a stop-or-move random walk; its non-tottering variant runs the same
computation on the non-tottering expansion of Morgan-relabeled graphs.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..exceptions import GammaTooLarge, NonConvergence
from ..graph import LabeledGraph, direct_product
from ..transforms import morgan_relabel, non_tottering_transform

DIRECT_SOLVE_LIMIT = 2000
FIXED_POINT_TOL = 1e-12
FIXED_POINT_MAX_ITER = 100_000


def _solve(system: sp.csr_matrix, transition: sp.csr_matrix, rhs: np.ndarray) -> np.ndarray:
    """Solve ``(I - T) x = rhs`` given ``system = I - T``."""
    if system.shape[0] <= DIRECT_SOLVE_LIMIT:
        return np.atleast_1d(spla.spsolve(system.tocsc(), rhs))
    x = rhs.copy()
    for _ in range(FIXED_POINT_MAX_ITER):
        nxt = rhs + transition @ x
        if np.max(np.abs(nxt - x)) <= FIXED_POINT_TOL * max(1.0, np.max(np.abs(nxt))):
            return nxt
        x = nxt
    raise NonConvergence("fixed-point iteration did not converge")


def grw_kernel(g1: LabeledGraph, g2: LabeledGraph, gamma: float) -> float:
    """Geometric random walk kernel: entry sum of ``(I - gamma A)^-1``."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    prod = direct_product(g1, g2)
    if prod.size == 0:
        return 0.0
    deg = prod.max_degree()
    if deg > 0 and gamma >= 1.0 / deg:
        raise GammaTooLarge(
            f"gamma={gamma} >= 1/{deg} for product of {g1.name!r} and {g2.name!r}"
        )
    t = gamma * prod.adjacency_sparse
    system = sp.identity(prod.size, format="csr") - t
    x = _solve(system, t, np.ones(prod.size))
    return float(x.sum())


def exp_walk_kernel(g1: LabeledGraph, g2: LabeledGraph, beta: float) -> float:
    """Entry sum of ``exp(beta A)`` through the eigendecomposition of ``A``."""
    prod = direct_product(g1, g2)
    if prod.size == 0:
        return 0.0
    evals, evecs = np.linalg.eigh(prod.adjacency)
    proj = evecs.sum(axis=0)
    return float(np.sum(np.exp(beta * evals) * proj**2))


def nstep_kernel(g1: LabeledGraph, g2: LabeledGraph, weights: Sequence[float]) -> float:
    """``sum_n weights[n] * 1^T A^n 1`` for ``n = 0..N``."""
    weights = [float(w) for w in weights]
    if not weights or any(w < 0 for w in weights):
        raise ValueError("weights must be a non-empty sequence of non-negative numbers")
    prod = direct_product(g1, g2)
    if prod.size == 0:
        return 0.0
    a = prod.adjacency_sparse
    v = np.ones(prod.size)
    total = 0.0
    for n, w in enumerate(weights):
        if n:
            v = a @ v
        total += w * v.sum()
    return float(total)


def walk_distribution(g: LabeledGraph, stop_prob: float, starts: Sequence[int] | None = None):
    """Start, transition and stop probabilities of the stop-or-move walk.

    The walk starts uniformly on ``starts`` (default: every vertex), stops with
    probability ``stop_prob`` and otherwise moves to a uniformly chosen
    out-neighbor.  A vertex without out-neighbors stops with probability 1.
    """
    if not 0.0 < stop_prob < 1.0:
        raise ValueError("stop_prob must lie in (0, 1)")
    n = g.vertex_count
    start = np.zeros(n)
    idx = range(n) if starts is None else starts
    idx = list(idx)
    start[idx] = 1.0 / len(idx)
    stop = np.where(g.degrees > 0, stop_prob, 1.0)
    rows, cols, vals = [], [], []
    for u, out in enumerate(g.out_edges):
        for v, _ in out:
            rows.append(u)
            cols.append(v)
            vals.append((1.0 - stop_prob) / len(out))
    trans = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    return start, trans, stop


def _product_transition(g1, g2, prod, t1, t2):
    """Transition matrix on the product graph restricted to matched edges."""
    coo = prod.adjacency_sparse.tocoo()
    verts = prod.vertices
    vals = np.array(
        [t1[verts[r][0], verts[c][0]] * t2[verts[r][1], verts[c][1]] for r, c in zip(coo.row, coo.col)]
    )
    return sp.csr_matrix((vals, (coo.row, coo.col)), shape=coo.shape)


def _marginalized(g1, g2, stop_prob, starts1=None, starts2=None) -> float:
    prod = direct_product(g1, g2)
    if prod.size == 0:
        return 0.0
    s1, t1, q1 = walk_distribution(g1, stop_prob, starts1)
    s2, t2, q2 = walk_distribution(g2, stop_prob, starts2)
    t1, t2 = t1.toarray(), t2.toarray()
    idx1 = np.array([p[0] for p in prod.vertices])
    idx2 = np.array([p[1] for p in prod.vertices])
    start = s1[idx1] * s2[idx2]
    stop = q1[idx1] * q2[idx2]
    trans = _product_transition(g1, g2, prod, t1, t2)
    system = sp.identity(prod.size, format="csr") - trans
    x = _solve(system, trans, stop)
    return float(start @ x)


def marginalized_kernel(g1: LabeledGraph, g2: LabeledGraph, stop_prob: float) -> float:
    """Sum over walk pairs of ``p1(h1) p2(h2)`` for identical label sequences."""
    return _marginalized(g1, g2, stop_prob)


def marginalized_nt_kernel(
    g1: LabeledGraph, g2: LabeledGraph, stop_prob: float, morgan_iterations: int = 0
) -> float:
    """Marginalized kernel restricted to non-tottering walks.

    Walks start on the original vertices of the expanded graphs; the expansion
    renormalizes each step over the non-tottering successors.
    """
    e1 = non_tottering_transform(morgan_relabel(g1, morgan_iterations))
    e2 = non_tottering_transform(morgan_relabel(g2, morgan_iterations))
    return _marginalized(e1, e2, stop_prob, range(g1.vertex_count), range(g2.vertex_count))
