"""Python interface to the damped semilinear wave laboratory."""

from ._core import (
    DampingSpec,
    ProblemSpec,
    WeightFunction,
    calibrate_weight,
    corpus_summary,
    critical_exponent,
    damping_coefficient,
    fit_loglog_slope,
    fit_power_slope,
    initial_mass_functional,
    lifespan_exponent,
    lifespan_sweep,
    simulate,
)

__all__ = [
    "DampingSpec",
    "ProblemSpec",
    "WeightFunction",
    "calibrate_weight",
    "corpus_summary",
    "critical_exponent",
    "damping_coefficient",
    "fit_loglog_slope",
    "fit_power_slope",
    "initial_mass_functional",
    "lifespan_exponent",
    "lifespan_sweep",
    "simulate",
]
