"""Clearing vectors and systemic risk sets of interbank networks."""

from ._core import (
    ApproximationPair,
    ClearingResult,
    FinancialNetwork,
    Grouping,
    NetriskError,
    RiskSpec,
    ScenarioSet,
    Variant,
    aggregate,
    approximate,
    clear,
    expected_aggregate,
    generate_network,
    generate_scenarios,
    member,
    min_step,
    phi,
    picard_clearing,
    verify_clearing,
    weighted_sum,
)

__all__ = [
    "ApproximationPair",
    "ClearingResult",
    "FinancialNetwork",
    "Grouping",
    "NetriskError",
    "RiskSpec",
    "ScenarioSet",
    "Variant",
    "aggregate",
    "approximate",
    "clear",
    "expected_aggregate",
    "generate_network",
    "generate_scenarios",
    "member",
    "min_step",
    "phi",
    "picard_clearing",
    "verify_clearing",
    "weighted_sum",
]
