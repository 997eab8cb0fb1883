"""Hybrid quantum-classical ant colony optimisation for the travelling salesman problem."""

from .aco_core import Hyperparameters, PheromoneState, transition_distribution
from .graph_io import ProblemInstance, bundled_instance, load_instance, parse_tsplib
from .oracle import held_karp
from .selector import get_parameters, get_selector, reconstruct_amplitudes, select
from .solver import RunResult, SolverConfig, error_in_estimation, qubit_requirements, run

__version__ = "0.1.0"

__all__ = [
    "Hyperparameters",
    "PheromoneState",
    "ProblemInstance",
    "RunResult",
    "SolverConfig",
    "bundled_instance",
    "error_in_estimation",
    "get_parameters",
    "get_selector",
    "held_karp",
    "load_instance",
    "parse_tsplib",
    "qubit_requirements",
    "reconstruct_amplitudes",
    "run",
    "select",
    "transition_distribution",
]
