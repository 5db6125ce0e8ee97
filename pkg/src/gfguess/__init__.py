"""Guess algebraic generating functions from initial terms of a sequence."""

from .exceptions import GFGuessError
from .lattice import algdep, is_lll_reduced, lll, residual_check
from .numerics import Fixed, Poly, primitive_part
from .pipeline import PipelineConfig, Report, emit_report, parse_sequence, run_batch, run_pipeline
from .reconstruct import (
    BivariatePoly,
    RadicalClosedForm,
    assemble_bivariate,
    direct_algeq,
    newton_interp,
    search_direct,
    solve_closed_form,
    verify_candidate,
)
from .recurrence import PRecurrence, TermSequence, extend_sequence, fit_recurrence, ratio_form
from .series import TruncatedSeries, eval_at_inverse_int, series_from_algebraic, substitute_series

__all__ = [
    "AlgebraicGFGuesser",
    "BivariatePoly",
    "Fixed",
    "GFGuessError",
    "PRecurrence",
    "PipelineConfig",
    "Poly",
    "RadicalClosedForm",
    "Report",
    "TermSequence",
    "TruncatedSeries",
    "algdep",
    "assemble_bivariate",
    "direct_algeq",
    "emit_report",
    "eval_at_inverse_int",
    "extend_sequence",
    "fit_recurrence",
    "is_lll_reduced",
    "lll",
    "newton_interp",
    "parse_sequence",
    "primitive_part",
    "ratio_form",
    "residual_check",
    "run_batch",
    "run_pipeline",
    "search_direct",
    "series_from_algebraic",
    "solve_closed_form",
    "substitute_series",
    "verify_candidate",
]


def __getattr__(name):
    # keeps scikit-learn off the import path unless the estimator is used
    if name == "AlgebraicGFGuesser":
        from .estimator import AlgebraicGFGuesser

        return AlgebraicGFGuesser
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
