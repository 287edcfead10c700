"""Quantitative comparison of analytic and simulated age distributions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytic import pmf_auto_truncate
from .core import AgePmf, AoiError, PathConfig, pmf_mean
from .simulator import EmpiricalDist, SimResult

ANALYTIC_TAIL_TOL = 1e-12


class EmptySampleError(AoiError):
    """Raised when an empirical distribution holds no observations."""


@dataclass(frozen=True)
class ComparisonReport:
    """Divergence of a simulated age distribution from the analytic one.

    ``per_age_residuals`` lists (age, empirical probability, analytic
    probability) for every age up to the analytic horizon, ready for
    overlay plots.
    """

    tv_distance: float
    mean_gap: float
    per_age_residuals: tuple[tuple[int, float, float], ...]
    sample_count: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.tv_distance <= 1.0:
            raise ValueError("total variation distance must lie in [0, 1]")
        if self.sample_count <= 0:
            raise ValueError("sample_count must be positive")


def normalize(emp: EmpiricalDist) -> AgePmf:
    """Relative frequencies up to the largest observed age; no tail mass."""
    if emp.total <= 0:
        raise EmptySampleError("cannot normalize an empty sample")
    probs = np.zeros(max(emp.counts) + 1)
    for age, count in emp.counts.items():
        probs[age] = count / emp.total
    return AgePmf(probs, 0.0)


def total_variation(a: AgePmf, b: AgePmf) -> float:
    """Half the L1 distance over the union of supports plus the tail gap.

    Entries beyond a pmf's own horizon count as zero (that mass lives in its
    tail), and the two tail masses are compared in aggregate.
    """
    size = max(a.probs.size, b.probs.size)
    pa = np.zeros(size)
    pa[:a.probs.size] = a.probs
    pb = np.zeros(size)
    pb[:b.probs.size] = b.probs
    return 0.5 * float(np.abs(pa - pb).sum()) + 0.5 * abs(a.tail_mass - b.tail_mass)


def _truncated(pmf: AgePmf, delta_max: int) -> AgePmf:
    """Re-truncate to a new horizon, folding cut entries into the tail."""
    if delta_max >= pmf.delta_max:
        return pmf
    cut = float(pmf.probs[delta_max + 1:].sum())
    return AgePmf(pmf.probs[:delta_max + 1], pmf.tail_mass + cut)


def compare(path: PathConfig, sim: SimResult) -> ComparisonReport:
    """Compare a simulation of ``path`` against the exact distribution.

    Observed ages beyond the analytic horizon are folded into the empirical
    tail so they are weighed against the analytic tail mass in aggregate.
    """
    analytic = pmf_auto_truncate(path, ANALYTIC_TAIL_TOL)
    empirical = _truncated(normalize(sim.empirical), analytic.delta_max)
    tv = total_variation(analytic, empirical)
    analytic_mean = pmf_mean(analytic, max(path.loss_probs)).value
    residuals = []
    for age in range(analytic.delta_max + 1):
        observed = float(empirical.probs[age]) if age < empirical.probs.size else 0.0
        residuals.append((age, observed, float(analytic.probs[age])))
    return ComparisonReport(tv, abs(sim.mean_age - analytic_mean),
                            tuple(residuals), sim.empirical.total)
