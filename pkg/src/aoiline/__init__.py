"""Exact and simulated age-of-information distributions for lossy line networks.

A line network carries periodic status updates from a source across N
relaying links, each dropping packets independently with a fixed
probability.  This package computes the exact stationary distribution of
the receiver's age (pmf, ccdf, quantiles, moments), simulates the same
network in discrete time, and compares the two.
"""

__version__ = "0.1.0"

from .analytic import (DEFAULT_MAX_DELTA, EQUAL_RATE_EPS, DegenerateRatesError,
                       HorizonOverflowError, OutOfHorizonError, QuantileQuery,
                       ccdf, expected_age, icdf, pmf_auto_truncate, pmf_dp,
                       pmf_recursive_literal, pmf_single_hop,
                       pmf_three_hop_closed, pmf_two_hop_closed)
from .core import (AgePmf, AoiError, EmptyPathError, InfeasibleScheduleError,
                   LinkBudget, PathConfig, ProbOutOfRangeError,
                   TailCorrectedMean, merge_slots, pmf_mean, validate_path)
from .simulator import EmpiricalDist, SimConfig, SimResult, run, step
from .stats import (ComparisonReport, EmptySampleError, compare, normalize,
                    total_variation)

__all__ = [
    "__version__",
    "AgePmf", "AoiError", "ComparisonReport", "DEFAULT_MAX_DELTA",
    "DegenerateRatesError", "EQUAL_RATE_EPS", "EmpiricalDist",
    "EmptyPathError", "EmptySampleError", "HorizonOverflowError",
    "InfeasibleScheduleError", "LinkBudget", "OutOfHorizonError",
    "PathConfig", "ProbOutOfRangeError", "QuantileQuery", "SimConfig",
    "SimResult", "TailCorrectedMean", "ccdf", "compare", "expected_age",
    "icdf", "merge_slots", "normalize", "pmf_auto_truncate", "pmf_dp",
    "pmf_mean", "pmf_recursive_literal", "pmf_single_hop",
    "pmf_three_hop_closed", "pmf_two_hop_closed", "run", "step",
    "total_variation", "validate_path",
]
