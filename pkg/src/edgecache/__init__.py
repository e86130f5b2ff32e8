"""Backhaul load evaluation for a two-relay edge caching network.

Exact rational closed forms, a packet-level Monte-Carlo simulator, and an
exhaustive enumeration oracle for two caching schemes (erasure-coded
benchmark and edge coded caching).
"""

from .combinatorics import ExactValue, binomial, diff_zeros, factorial, stirling2
from .load_analytic import (
    AnalyticUnavailableError,
    LoadBreakdown,
    Scenario,
    ecc_load,
    mds_load,
    normalized_load,
    omega1,
)
from .occupancy import Alphabets, Population
from .popularity import Uniform, Zipf
from .simulator import (
    ECC,
    MDS,
    LoadReport,
    OutcomeTally,
    PlacementMap,
    Realization,
    count_backhaul_ecc,
    count_backhaul_mds,
    monte_carlo,
    place_popularity,
    place_uniform,
    sample_realization,
    simulate_protocol,
    tally,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticUnavailableError",
    "Alphabets",
    "ECC",
    "ExactValue",
    "LoadBreakdown",
    "LoadReport",
    "MDS",
    "OutcomeTally",
    "PlacementMap",
    "Population",
    "Realization",
    "Scenario",
    "Uniform",
    "Zipf",
    "binomial",
    "count_backhaul_ecc",
    "count_backhaul_mds",
    "diff_zeros",
    "ecc_load",
    "factorial",
    "mds_load",
    "monte_carlo",
    "normalized_load",
    "omega1",
    "place_popularity",
    "place_uniform",
    "sample_realization",
    "simulate_protocol",
    "stirling2",
    "tally",
]
