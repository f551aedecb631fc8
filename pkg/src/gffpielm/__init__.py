"""Physics-informed random-feature solvers with per-neuron Fourier frequencies."""

from .features import ActivationKind, FeatureLayer, make_gff_layer, make_vanilla_layer
from .lstsq import solve_least_squares
from .pipeline import LayerConfig, solve_problem
from .sampling import SamplingPlan

__all__ = [
    "ActivationKind",
    "FeatureLayer",
    "LayerConfig",
    "SamplingPlan",
    "make_gff_layer",
    "make_vanilla_layer",
    "solve_least_squares",
    "solve_problem",
]
