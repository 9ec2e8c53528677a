"""Worked example on E(2) x R: model, lambda-representation, reduction, Heun numerics."""

from .dfunction import DFunction, DFunctionReport, periodicity_check, verify_dfunction
from .heun import HeunParams, HeunShapeError, SeriesSolution, heun_transform, printed_heun_params, series_solution
from .lambda_rep import PCHART, LambdaRep, lambda_rep
from .model import CHART, E2RConfig, build_model, cocycle, extension_realization, field_config, metric_form
from .numerics import (
    NumericSolution,
    SingularApproachError,
    integrate_reduced,
    reproducing_check,
    series_agreement,
    skew_hermiticity_check,
    wronskian_check,
)
from .pipeline import exact_identity_suite, printed_potential, reduce_report, solve_report
from .reduce import ReducedODE, comparison_report, printed_coefficients, reduce_equation

__all__ = [
    "CHART",
    "DFunction",
    "DFunctionReport",
    "E2RConfig",
    "HeunParams",
    "HeunShapeError",
    "LambdaRep",
    "NumericSolution",
    "PCHART",
    "ReducedODE",
    "SeriesSolution",
    "SingularApproachError",
    "build_model",
    "cocycle",
    "comparison_report",
    "exact_identity_suite",
    "extension_realization",
    "field_config",
    "heun_transform",
    "integrate_reduced",
    "lambda_rep",
    "metric_form",
    "periodicity_check",
    "printed_coefficients",
    "printed_heun_params",
    "printed_potential",
    "reduce_equation",
    "reduce_report",
    "reproducing_check",
    "series_agreement",
    "series_solution",
    "skew_hermiticity_check",
    "solve_report",
    "verify_dfunction",
    "wronskian_check",
]
