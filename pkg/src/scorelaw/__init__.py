"""Preferential-attachment score evolution and clique-interaction graphs,
with closed-form limit laws and empirical verification tooling."""

from .analytic import (
    LimitDistribution,
    c_gamma,
    c_recurrence,
    deviation_threshold,
    expected_histogram_oracle,
    mass_identity_check,
    tail_coefficient,
)
from .fenwick import WeightedSampler
from .graph import (
    CliqueRegistry,
    GraphRunResult,
    derived_params,
    init_graph,
    interact,
    run_graph,
    step_graph,
    weight_transition_probe,
)
from .histogram import Histogram
from .model_s import ScoreTable, init_population, run, step
from .params import GraphParams, ParameterError, SimParams
from .seeding import replica_seed, splitmix64
from .stats import (
    ConcentrationReport,
    FitError,
    FitReport,
    PowerLawTailFitter,
    compare_to_limit,
    concentration_scan,
    fit_tail,
    normalize,
)

__all__ = [
    "CliqueRegistry",
    "ConcentrationReport",
    "FitError",
    "FitReport",
    "GraphParams",
    "GraphRunResult",
    "Histogram",
    "LimitDistribution",
    "ParameterError",
    "PowerLawTailFitter",
    "ScoreTable",
    "SimParams",
    "WeightedSampler",
    "c_gamma",
    "c_recurrence",
    "compare_to_limit",
    "concentration_scan",
    "derived_params",
    "deviation_threshold",
    "expected_histogram_oracle",
    "fit_tail",
    "init_graph",
    "init_population",
    "interact",
    "mass_identity_check",
    "normalize",
    "replica_seed",
    "run",
    "run_graph",
    "splitmix64",
    "step",
    "step_graph",
    "tail_coefficient",
    "weight_transition_probe",
]
