"""Soft-margin SVM on precomputed kernels, with one-vs-one and one-vs-all wrappers."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .exceptions import DimensionMismatch, NonConvergence, NoSupportVectors
from .gram import GramMatrix, check_psd

KKT_TOL = 1e-6
MAX_ITER = 1_000_000
_TAU = 1e-12


@dataclass
class SvmModel:
    support_indices: np.ndarray
    multipliers: np.ndarray
    labels: np.ndarray
    bias: float
    C: float
    kernel_descriptor: dict = field(default_factory=dict)
    n_train: int = 0
    iterations: int = 0

    @property
    def coefficients(self) -> np.ndarray:
        return self.multipliers * self.labels


def _values(gram) -> np.ndarray:
    return gram.values if isinstance(gram, GramMatrix) else np.asarray(gram, dtype=float)


def _solve_dual(K: np.ndarray, y: np.ndarray, C: float, tol: float, max_iter: int):
    """Two-coordinate descent on the dual.

    Minimizes ``0.5 a'Qa - sum(a)`` with ``Q = yy' * K``, ``0 <= a <= C`` and
    ``y'a = 0``.  The first index is the maximal KKT violator; the second
    maximizes the guaranteed objective decrease among its violating partners.
    Returns the multipliers, the gradient and the number of pair updates.
    """
    n = len(y)
    Q = K * np.outer(y, y)
    diag = np.diag(Q).copy()
    alpha = np.zeros(n)
    grad = -np.ones(n)
    pos = y > 0
    for it in range(max_iter):
        up = np.where(pos, alpha < C, alpha > 0)
        low = np.where(pos, alpha > 0, alpha < C)
        score = -y * grad
        s_up = np.where(up, score, -np.inf)
        i = int(np.argmax(s_up))
        g_max = s_up[i]
        s_low = np.where(low, score, np.inf)
        if g_max - s_low.min() < tol:
            return alpha, grad, it
        gain = g_max - s_low
        curv = diag[i] + diag - 2 * y[i] * y * Q[i]
        curv = np.where(curv > 0, curv, _TAU)
        obj = np.where(low & (gain > 0), -(gain**2) / curv, np.inf)
        j = int(np.argmin(obj))
        old_i, old_j = alpha[i], alpha[j]
        if y[i] != y[j]:
            quad = max(diag[i] + diag[j] + 2 * Q[i, j], _TAU)
            delta = (-grad[i] - grad[j]) / quad
            diff = old_i - old_j
            ai, aj = old_i + delta, old_j + delta
            if diff > 0:
                if aj < 0:
                    aj, ai = 0.0, diff
            elif ai < 0:
                ai, aj = 0.0, -diff
            if diff > 0:
                if ai > C:
                    ai, aj = C, C - diff
            elif aj > C:
                aj, ai = C, C + diff
        else:
            quad = max(diag[i] + diag[j] - 2 * Q[i, j], _TAU)
            delta = (grad[i] - grad[j]) / quad
            total = old_i + old_j
            ai, aj = old_i - delta, old_j + delta
            if total > C:
                if ai > C:
                    ai, aj = C, total - C
            elif aj < 0:
                aj, ai = 0.0, total
            if total > C:
                if aj > C:
                    aj, ai = C, total - C
            elif ai < 0:
                ai, aj = 0.0, total
        alpha[i], alpha[j] = ai, aj
        grad += Q[:, i] * (ai - old_i) + Q[:, j] * (aj - old_j)
    raise NonConvergence(f"SMO did not reach KKT tolerance {tol} within {max_iter} updates")


def _bias(alpha, grad, y, C) -> float:
    yg = y * grad
    free = (alpha > 0) & (alpha < C)
    if free.any():
        rho = float(yg[free].mean())
    else:
        at_upper = alpha >= C
        # bounds on rho from the KKT conditions of bounded multipliers
        ub_mask = (at_upper & (y < 0)) | (~at_upper & (y > 0))
        lb_mask = (at_upper & (y > 0)) | (~at_upper & (y < 0))
        ub = yg[ub_mask].min() if ub_mask.any() else np.inf
        lb = yg[lb_mask].max() if lb_mask.any() else -np.inf
        rho = float((ub + lb) / 2)
    return -rho


def svm_train(
    gram, labels, C: float, tol: float = KKT_TOL, max_iter: int = MAX_ITER, psd_check: bool = True
) -> SvmModel:
    K = _values(gram)
    y = np.asarray(labels, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise DimensionMismatch(f"Gram matrix must be square, got {K.shape}")
    if len(y) != K.shape[0]:
        raise DimensionMismatch(f"{len(y)} labels for a {K.shape[0]}x{K.shape[0]} Gram matrix")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("binary labels must be +1 or -1")
    if C <= 0:
        raise ValueError("C must be positive")
    if len(np.unique(y)) < 2:
        raise NoSupportVectors("all training labels are identical")
    if psd_check and not check_psd(K).passed:
        warnings.warn("training Gram matrix is not positive semidefinite", RuntimeWarning, stacklevel=2)
    alpha, grad, iters = _solve_dual(K, y, float(C), tol, max_iter)
    sv = np.flatnonzero(alpha > 0)
    descriptor = dict(gram.kernel_descriptor) if isinstance(gram, GramMatrix) else {}
    return SvmModel(sv, alpha[sv], y[sv], _bias(alpha, grad, y, C), float(C), descriptor, len(y), iters)


def decision_values(model: SvmModel, kernel_rows) -> np.ndarray:
    """Decision values for rows of kernel evaluations against the training set."""
    rows = np.atleast_2d(np.asarray(kernel_rows, dtype=float))
    if rows.shape[1] == model.n_train:
        rows = rows[:, model.support_indices]
    elif rows.shape[1] != len(model.support_indices):
        raise DimensionMismatch(
            f"kernel row of length {rows.shape[1]}; expected {model.n_train} or {len(model.support_indices)}"
        )
    return rows @ model.coefficients + model.bias


def svm_predict(model: SvmModel, kernel_row) -> tuple:
    """Return ``(label, decision_value)``; a zero decision value maps to +1."""
    d = float(decision_values(model, kernel_row)[0])
    return (1 if d >= 0 else -1), d


def kkt_residual(model: SvmModel, gram, labels) -> float:
    """Largest violation of the soft-margin optimality conditions on the training set."""
    K = _values(gram)
    y = np.asarray(labels, dtype=float)
    alpha = np.zeros(len(y))
    alpha[model.support_indices] = model.multipliers
    margin = y * decision_values(model, K)
    viol = np.where(
        alpha <= 0,
        np.maximum(0.0, 1 - margin),
        np.where(alpha >= model.C, np.maximum(0.0, margin - 1), np.abs(margin - 1)),
    )
    return float(viol.max())


@dataclass
class MulticlassModel:
    scheme: str
    classes: list
    models: list  # (positive class, negative class or None, SvmModel)
    absolute_rule: bool = False


def _sub_model(K, y_pm, idx, C, descriptor, psd_check) -> SvmModel:
    m = svm_train(K[np.ix_(idx, idx)], y_pm, C, psd_check=psd_check)
    m.support_indices = idx[m.support_indices]
    m.n_train = K.shape[0]
    m.kernel_descriptor = descriptor
    return m


def multiclass_train(
    gram, labels, C: float, scheme: str = "ovo", absolute_rule: bool = False, psd_check: bool = True
) -> MulticlassModel:
    """Train ``K(K-1)/2`` pairwise (``ovo``) or ``K`` one-vs-rest (``ova``) binary SVMs.

    With two classes both schemes train the same single model, whose positive
    class is the larger label.  ``absolute_rule`` makes one-vs-all pick the
    classifier with the largest absolute decision value instead of the largest
    signed one.
    """
    if scheme not in ("ovo", "ova"):
        raise ValueError(f"unknown multiclass scheme {scheme!r}")
    K = _values(gram)
    labels = np.asarray(labels)
    classes = sorted(np.unique(labels).tolist())
    if len(classes) < 2:
        raise NoSupportVectors("need at least two classes")
    descriptor = dict(gram.kernel_descriptor) if isinstance(gram, GramMatrix) else {}
    everything = np.arange(len(labels))
    models = []
    if len(classes) == 2:
        neg, pos = classes
        y_pm = np.where(labels == pos, 1.0, -1.0)
        models.append((pos, neg, _sub_model(K, y_pm, everything, C, descriptor, psd_check)))
    elif scheme == "ovo":
        for a, b in combinations(classes, 2):
            idx = np.flatnonzero((labels == a) | (labels == b))
            y_pm = np.where(labels[idx] == a, 1.0, -1.0)
            models.append((a, b, _sub_model(K, y_pm, idx, C, descriptor, psd_check)))
    else:
        for a in classes:
            y_pm = np.where(labels == a, 1.0, -1.0)
            models.append((a, None, _sub_model(K, y_pm, everything, C, descriptor, psd_check)))
    return MulticlassModel(scheme, classes, models, absolute_rule)


def multiclass_predict(bundle: MulticlassModel, kernel_rows) -> np.ndarray:
    """Predicted class per row of kernel evaluations against the full training set."""
    rows = np.atleast_2d(np.asarray(kernel_rows, dtype=float))
    if len(bundle.models) == 1:
        pos, neg, m = bundle.models[0]
        return np.where(decision_values(m, rows) >= 0, pos, neg)
    k = len(bundle.classes)
    col = {c: i for i, c in enumerate(bundle.classes)}
    if bundle.scheme == "ova":
        dec = np.column_stack([decision_values(m, rows) for _, _, m in bundle.models])
        if bundle.absolute_rule:
            dec = np.abs(dec)
        return np.asarray(bundle.classes)[np.argmax(dec, axis=1)]
    votes = np.zeros((rows.shape[0], k))
    strength = np.zeros((rows.shape[0], k))
    for a, b, m in bundle.models:
        d = decision_values(m, rows)
        win_a = d >= 0
        votes[win_a, col[a]] += 1
        votes[~win_a, col[b]] += 1
        strength[:, col[a]] += d
        strength[:, col[b]] -= d
    # most votes wins; summed decision values break ties
    out = []
    for v, s in zip(votes, strength):
        top = np.flatnonzero(v == v.max())
        out.append(bundle.classes[top[np.argmax(s[top])]])
    return np.asarray(out)
