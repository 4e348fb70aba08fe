"""Randomized truncated trapezoidal quadrature against the standard Gaussian."""

from .estimator import ReplicatedEstimate, mse_estimator_unbiasedness_check, replicate
from .oracle import exhaustive_expectation, integrate_gaussian
from .rng import RngStream, truncated_normal_tail, uniform_int, uniform_open
from .rules import (CutoffStrategy, RuleConfig, RuleRealization, cutoff_T,
                    deterministic_rule, draw_realization, evaluate_realization)
from .special import gaussian_cdf, gaussian_pdf, gaussian_quantile, upper_tail_mass
from .study import ExperimentRecord, SlopeFit, fit_slope, run_convergence_study

__version__ = "0.1.0"
