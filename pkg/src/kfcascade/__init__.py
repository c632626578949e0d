"""Cascades of scalar Kalman filter agents under private-prior and word-of-mouth sharing."""

__version__ = "0.1.0"

from .chain import AgentSlot, ChainState, PriorConvention, Setup, init_chain, pp_time_step, wom_time_step
from .experiments import (ExperimentConfig, ExperimentReport, paired_comparison, run_convergence_trace,
                          run_coverage, run_mse)
from .errors import ConvergenceError, InvariantError, ParameterError
from .model import ModelParams, Trajectory, simulate, validate
from .riccati import (DareProblem, FixedPointReport, NoisePolynomial, build_noise_polynomial,
                      contraction_certificate, dare_closed_form, dare_iterate, pp_cascade_fixed_points,
                      wom_fixed_point, wom_map)

__all__ = [
    "AgentSlot", "ChainState", "PriorConvention", "Setup", "init_chain", "pp_time_step", "wom_time_step",
    "ExperimentConfig", "ExperimentReport", "paired_comparison", "run_convergence_trace", "run_coverage",
    "run_mse",
    "ConvergenceError", "InvariantError", "ParameterError",
    "ModelParams", "Trajectory", "simulate", "validate",
    "DareProblem", "FixedPointReport", "NoisePolynomial", "build_noise_polynomial",
    "contraction_certificate", "dare_closed_form", "dare_iterate", "pp_cascade_fixed_points",
    "wom_fixed_point", "wom_map",
]
