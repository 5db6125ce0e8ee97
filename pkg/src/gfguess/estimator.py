"""scikit-learn style wrapper around :func:`run_pipeline`."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .exceptions import InputError
from .numerics import as_fraction
from .pipeline import PipelineConfig, run_pipeline
from .recurrence import TermSequence
from .series import series_from_algebraic


def _as_terms(X) -> TermSequence:
    if isinstance(X, TermSequence):
        return X
    arr = np.asarray(X, dtype=object)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise InputError(f"expected a 1-d sequence of terms, got shape {arr.shape}")
    if arr.size == 0:
        raise InputError("empty sequence")
    try:
        return TermSequence(as_fraction(x) for x in arr)
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from None


class AlgebraicGFGuesser(BaseEstimator):
    """Fit an algebraic equation to the generating function of a sequence.

    ``fit`` takes the known terms; ``predict`` takes indices and returns the
    terms the conjectured equation implies there.
    """

    def __init__(
        self,
        m0: int = 100,
        points: Optional[int] = None,
        deg_y: int = 2,
        deg_y_cap: int = 6,
        deg_z_bound: int = 12,
        precision: int = 200,
        max_order: int = 6,
        max_degree: int = 6,
        guard: int = 3,
        slack: int = 2,
        mode: str = "auto",
        workers: int = 1,
    ):
        self.m0 = m0
        self.points = points
        self.deg_y = deg_y
        self.deg_y_cap = deg_y_cap
        self.deg_z_bound = deg_z_bound
        self.precision = precision
        self.max_order = max_order
        self.max_degree = max_degree
        self.guard = guard
        self.slack = slack
        self.mode = mode
        self.workers = workers

    def _config(self) -> PipelineConfig:
        return PipelineConfig(**self.get_params())

    def fit(self, X, y=None):
        seq = _as_terms(X)
        report = run_pipeline(self._config(), seq)
        self.report_ = report
        self.status_ = report.status
        self.recurrence_ = report.recurrence
        self.equation_ = report.equation if report.status == "conjecture-found" else None
        self.closed_form_ = report.closed_form if self.equation_ is not None else None
        self.n_terms_ = len(seq)
        self.a0_ = seq[0]
        return self

    def predict(self, X) -> list[Fraction]:
        check_is_fitted(self, "report_")
        if self.equation_ is None:
            raise ValueError(f"no conjecture available (status {self.status_})")
        idx = np.asarray(X, dtype=object).ravel()
        if idx.size == 0:
            return []
        if any(not isinstance(i, (int, np.integer)) or i < 0 for i in idx):
            raise InputError("indices must be non-negative integers")
        N = int(max(idx)) + 1
        series = series_from_algebraic(self.equation_, self.a0_, N)
        return [series[int(i)] for i in idx]

    def fit_predict(self, X, indices) -> list[Fraction]:
        return self.fit(X).predict(indices)
