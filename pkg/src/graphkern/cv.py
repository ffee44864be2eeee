"""Stratified k-fold cross-validation with grid search over C and kernel parameters."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .exceptions import FoldTooSmall
from .gram import GramMatrix, check_psd
from .svm import multiclass_predict, multiclass_train

DEFAULT_C_GRID = (1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3)


@dataclass
class CvReport:
    fold_errors: list
    mean_error: float
    hyperparameters: dict
    seed: int
    folds: list = field(default_factory=list)
    grid: list = field(default_factory=list)

    @property
    def mean_accuracy(self) -> float:
        return 1.0 - self.mean_error

    def to_dict(self) -> dict:
        return {
            "fold_errors": self.fold_errors,
            "mean_error": self.mean_error,
            "mean_accuracy": self.mean_accuracy,
            "hyperparameters": self.hyperparameters,
            "seed": self.seed,
            "folds": self.folds,
            "grid": self.grid,
        }


def stratified_folds(labels, k: int, seed: int) -> np.ndarray:
    """Fold id per sample: shuffle within each class, concatenate, deal round-robin."""
    labels = np.asarray(labels)
    n = len(labels)
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= {n}, got k={k}")
    rng = np.random.default_rng(seed)
    order = np.concatenate([rng.permutation(np.flatnonzero(labels == c)) for c in sorted(np.unique(labels).tolist())])
    fold = np.empty(n, dtype=int)
    fold[order] = np.arange(n) % k
    return fold


def zero_one_error(y_true, y_pred) -> float:
    y_true, y_pred = np.asarray(y_true), np.asarray(y_pred)
    return float(np.mean(y_true != y_pred))


def _scaled(values, train, test):
    k_tt = values[np.ix_(train, train)]
    k_vt = values[np.ix_(test, train)]
    lo, hi = k_tt.min(), k_tt.max()
    if hi == lo:
        return np.zeros_like(k_tt), np.zeros_like(k_vt)
    return (k_tt - lo) / (hi - lo), (k_vt - lo) / (hi - lo)


def fold_errors(values, labels, folds, C, scale=True, scheme="ovo") -> list:
    labels = np.asarray(labels)
    k = int(folds.max()) + 1
    classes = np.unique(labels)
    errors = []
    for f in range(k):
        test = np.flatnonzero(folds == f)
        train = np.flatnonzero(folds != f)
        if len(np.unique(labels[train])) < len(classes):
            raise FoldTooSmall(f"a class is absent from the training split of fold {f}")
        if scale:
            k_tt, k_vt = _scaled(values, train, test)
        else:
            k_tt, k_vt = values[np.ix_(train, train)], values[np.ix_(test, train)]
        bundle = multiclass_train(k_tt, labels[train], C, scheme, psd_check=False)
        errors.append(zero_one_error(labels[test], multiclass_predict(bundle, k_vt)))
    return errors


def kfold_cv(
    grams,
    labels,
    k: int = 10,
    C_grid=DEFAULT_C_GRID,
    seed: int = 0,
    scale: bool = True,
    scheme: str = "ovo",
) -> CvReport:
    """Grid-searched k-fold CV.

    ``grams`` is a single Gram matrix or a list of ``(params, gram)`` pairs,
    one per kernel parameter setting.  The reported errors belong to the
    setting with the lowest mean error; ties go to the smallest C and then to
    the earliest parameter setting.  With ``scale`` each training sub-matrix
    is min-max scaled and its parameters are reused on the validation rows.
    The PSD warning is issued once per unscaled matrix, since the scaling
    offset changes the spectrum but not the SVM solution.
    """
    if isinstance(grams, (GramMatrix, np.ndarray)):
        grams = [({}, grams)]
    labels = np.asarray(labels)
    folds = stratified_folds(labels, k, seed)
    for params, gram in grams:
        if not check_psd(gram).passed:
            warnings.warn(f"Gram matrix for {params} is not positive semidefinite", RuntimeWarning, stacklevel=2)
    best = None
    grid = []
    for C in sorted(C_grid):
        for params, gram in grams:
            values = gram.values if isinstance(gram, GramMatrix) else np.asarray(gram, dtype=float)
            errs = fold_errors(values, labels, folds, C, scale, scheme)
            mean = float(np.mean(errs))
            grid.append({"C": C, "params": params, "mean_error": mean})
            if best is None or mean < best[0]:
                best = (mean, errs, {"C": C, **params})
    mean, errs, hyper = best
    return CvReport(errs, mean, hyper, seed, folds.tolist(), grid)
