"""Iterative hard weighted thresholding and weighted sparse recovery tools."""
from .combinatorics import count_supports, enumerate_supports, max_support_size
from .core import WeightVector, weighted_cardinality, weighted_l0, weighted_lp
from .experiments import ExperimentConfig, run_experiment
from .sensing import gaussian_matrix, rip_constant
from .solvers import SolverConfig, cosamp, ihwt, iht, omp
from .thresholding import (
    exact_weighted_threshold,
    hard_threshold,
    surrogate_weighted_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "WeightVector",
    "weighted_l0",
    "weighted_cardinality",
    "weighted_lp",
    "count_supports",
    "enumerate_supports",
    "max_support_size",
    "hard_threshold",
    "exact_weighted_threshold",
    "surrogate_weighted_threshold",
    "gaussian_matrix",
    "rip_constant",
    "SolverConfig",
    "ihwt",
    "iht",
    "cosamp",
    "omp",
    "ExperimentConfig",
    "run_experiment",
]
