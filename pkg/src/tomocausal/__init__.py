"""Tomographic and optimal-basis causal analysis of two-qubit states."""
from tomocausal.correlations import BipartiteState, quantum_causal_report, von_neumann_entropy
from tomocausal.kernels import BACKEND
from tomocausal.linalg import MeasurementBasis
from tomocausal.optimizer import OptimizationSettings, grid_oracle, maximize_mutual_information
from tomocausal.tomography import tomogram, tomographic_report

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BipartiteState",
    "MeasurementBasis",
    "OptimizationSettings",
    "grid_oracle",
    "maximize_mutual_information",
    "quantum_causal_report",
    "tomogram",
    "tomographic_report",
    "von_neumann_entropy",
]
