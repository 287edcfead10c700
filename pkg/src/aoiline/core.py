"""Domain types shared by the analytic engine, the simulator and the CLI.

Ages are dimensionless counts of sampling periods; wall-clock durations are
deliberately out of scope.  All types are immutable after construction and
safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

#: Absolute slack allowed when checking that a distribution sums to one.
NORMALIZATION_TOL = 1e-12


class AoiError(Exception):
    """Base class for errors raised by this package."""


class EmptyPathError(AoiError):
    """Raised when a path has no links."""


class ProbOutOfRangeError(AoiError):
    """Raised when a probability lies outside [0, 1)."""


class InfeasibleScheduleError(AoiError):
    """Raised when a sampling period has fewer slots than the path has links."""


@dataclass(frozen=True)
class PathConfig:
    """An N-hop line network described by ordered per-link loss probabilities.

    ``slots_per_period`` is scheduling metadata only: with m slots per
    sampling period and one transmission opportunity per link, a packet can
    traverse the whole path within a single period only if m >= N.
    """

    loss_probs: tuple[float, ...]
    slots_per_period: int | None = None

    def __post_init__(self) -> None:
        if len(self.loss_probs) == 0:
            raise EmptyPathError("a path needs at least one link")
        for i, p in enumerate(self.loss_probs):
            if not 0.0 <= p < 1.0:
                # p == 1 keeps the age growing forever: no stationary pmf.
                raise ProbOutOfRangeError(
                    f"loss probability p_{i + 1}={p!r} must lie in [0, 1)")
        m = self.slots_per_period
        if m is not None and m < self.hops:
            raise InfeasibleScheduleError(
                f"{m} slots per period cannot serve {self.hops} links")

    @property
    def hops(self) -> int:
        return len(self.loss_probs)


def validate_path(raw_probs: Sequence[float],
                  slots_per_period: int | None = None) -> PathConfig:
    """Turn raw per-link loss probabilities into a validated :class:`PathConfig`.

    Total over its inputs: every call either returns a valid config or raises
    :class:`EmptyPathError`, :class:`ProbOutOfRangeError` or
    :class:`InfeasibleScheduleError`.
    """
    probs = []
    for value in raw_probs:
        try:
            probs.append(float(value))
        except (TypeError, ValueError) as exc:
            raise ProbOutOfRangeError(
                f"loss probability {value!r} is not a number") from exc
    m: int | None = None
    if slots_per_period is not None:
        try:
            m = int(slots_per_period)
        except (TypeError, ValueError) as exc:
            raise InfeasibleScheduleError(
                f"slots_per_period {slots_per_period!r} is not an integer") from exc
        if m != slots_per_period:
            raise InfeasibleScheduleError(
                f"slots_per_period {slots_per_period!r} is not an integer")
    return PathConfig(tuple(probs), m)


@dataclass(frozen=True)
class LinkBudget:
    """L consecutive transmission slots on one link, each failing with p*."""

    per_slot_loss: float
    slot_count: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.per_slot_loss < 1.0:
            raise ProbOutOfRangeError(
                f"per-slot loss {self.per_slot_loss!r} must lie in [0, 1)")
        if self.slot_count < 1:
            raise ValueError("slot_count must be at least 1")


def merge_slots(budget: LinkBudget) -> float:
    """Effective loss probability of a link granted several consecutive slots.

    A transmission fails for the whole period only if all ``slot_count``
    attempts fail, so the merged probability is ``per_slot_loss ** slot_count``.
    """
    return budget.per_slot_loss ** budget.slot_count


@dataclass(frozen=True, eq=False)
class AgePmf:
    """Distribution of a non-negative integer age, truncated at ``delta_max``.

    ``probs[d]`` is Pr[age = d] for d = 0..delta_max and ``tail_mass`` is the
    probability strictly above ``delta_max``.  The support is infinite for any
    lossy link, so truncation is kept explicit and auditable instead of being
    silently renormalized away.
    """

    probs: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self) -> None:
        arr = np.array(self.probs, dtype=float, copy=True)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("probs must be a non-empty one-dimensional sequence")
        arr.flags.writeable = False
        object.__setattr__(self, "probs", arr)
        if float(arr.min()) < 0.0 or float(arr.max()) > 1.0 + NORMALIZATION_TOL:
            raise ValueError("pmf entries must lie in [0, 1]")
        if self.tail_mass < 0.0:
            raise ValueError(f"tail_mass must be non-negative, got {self.tail_mass!r}")
        total = float(arr.sum()) + self.tail_mass
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"probs plus tail_mass must sum to 1, got {total!r}")

    @property
    def delta_max(self) -> int:
        return self.probs.size - 1


class TailCorrectedMean(NamedTuple):
    """Mean of a truncated pmf; ``value`` already includes the correction."""

    value: float
    tail_correction: float


def pmf_mean(pmf: AgePmf, tail_bound_rate: float) -> TailCorrectedMean:
    """Mean age of a truncated pmf plus a bound on the truncated tail's share.

    The mass above ``delta_max`` is modelled as geometric with ratio
    ``tail_bound_rate`` (the largest per-link loss probability of the
    generating path), which bounds its contribution to the mean by
    ``tail_mass * (delta_max + 1 / (1 - rate))``.  The correction magnitude is
    reported separately so callers can audit the truncation.
    """
    if not 0.0 <= tail_bound_rate < 1.0:
        raise ProbOutOfRangeError(
            f"tail bound rate {tail_bound_rate!r} must lie in [0, 1)")
    ages = np.arange(pmf.probs.size)
    truncated = float(ages @ pmf.probs)
    correction = pmf.tail_mass * (pmf.delta_max + 1.0 / (1.0 - tail_bound_rate))
    return TailCorrectedMean(truncated + correction, correction)
