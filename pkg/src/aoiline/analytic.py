"""Exact stationary age distributions behind a lossy line path.

A single link with loss probability p leaves the downstream age at d with
probability (1 - p) * p**d: d failed attempts since the last success.  Links
fail independently and every relay forwards only the freshest packet, so each
hop adds an independent geometric contribution and the receiver age behind n
links is the discrete convolution of n geometric laws.

Three evaluation routes are exposed on purpose:

* closed forms for one, two and three hops -- fast, but singular when two
  links share a loss rate (the two-hop form falls back to the repeated-rate
  expression, the three-hop form refuses degenerate inputs);
* :func:`pmf_recursive_literal`, the convolution sum written as a memoized
  recursion over (age, hop);
* :func:`pmf_dp`, a dynamic program over the algebraically equivalent
  two-term recurrence ``f(d, n) = p_n * f(d-1, n) + (1 - p_n) * f(d, n-1)``,
  which has no singularities and costs O(hops * delta_max).

The dynamic program is the canonical evaluator; the other routes exist as
independent cross-checks and the test suite holds them to each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .core import AgePmf, AoiError, PathConfig, ProbOutOfRangeError

#: Pairwise loss-rate gap below which the closed forms are treated as
#: degenerate.  At this scale the repeated-rate expression differs from the
#: distinct-rate one by less than the closed forms' own check tolerance.
EQUAL_RATE_EPS = 1e-9

#: Default cap on the truncation horizon explored by :func:`pmf_auto_truncate`.
DEFAULT_MAX_DELTA = 10_000_000

_FIRST_HORIZON = 64


class DegenerateRatesError(AoiError):
    """Raised when a closed form would divide by a vanishing rate gap."""


class HorizonOverflowError(AoiError):
    """Raised when auto-truncation would exceed the horizon cap."""


class OutOfHorizonError(AoiError):
    """Raised when an age beyond a pmf's truncation horizon is queried."""


@dataclass(frozen=True)
class QuantileQuery:
    """Tail probabilities for which reliability ages are requested."""

    targets: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.targets) == 0:
            raise ValueError("at least one tail probability target is required")
        for eps in self.targets:
            if not 0.0 < eps < 1.0:
                raise ValueError(f"target {eps!r} must lie strictly in (0, 1)")


def _check_loss(p: float) -> None:
    if not 0.0 <= p < 1.0:
        raise ProbOutOfRangeError(f"loss probability {p!r} must lie in [0, 1)")


def _check_age(delta: int) -> None:
    if delta < 0:
        raise ValueError(f"age must be non-negative, got {delta!r}")


def pmf_single_hop(p: float, delta: int) -> float:
    """Pr[age = delta] behind one link: (1 - p) * p**delta."""
    _check_loss(p)
    _check_age(delta)
    return (1.0 - p) * p ** delta


def pmf_two_hop_closed(p1: float, p2: float, delta: int) -> float:
    """Closed-form Pr[age = delta] behind two links.

    For distinct rates this is
    ``(1-p1)(1-p2) * (p2**(d+1) - p1**(d+1)) / (p2 - p1)``; when the rates are
    within :data:`EQUAL_RATE_EPS` of each other the repeated-rate limit
    ``(d+1) * (1-p)**2 * p**d`` is used with p at the midpoint.
    """
    _check_loss(p1)
    _check_loss(p2)
    _check_age(delta)
    if abs(p1 - p2) <= EQUAL_RATE_EPS:
        p = 0.5 * (p1 + p2)
        return (delta + 1) * (1.0 - p) ** 2 * p ** delta
    num = p2 ** (delta + 1) - p1 ** (delta + 1)
    return (1.0 - p1) * (1.0 - p2) * num / (p2 - p1)


def pmf_three_hop_closed(p1: float, p2: float, p3: float, delta: int) -> float:
    """Closed-form Pr[age = delta] behind three links with distinct rates.

    Raises :class:`DegenerateRatesError` when any two rates are within
    :data:`EQUAL_RATE_EPS`; callers should fall back to :func:`pmf_dp`,
    which has no singularities.
    """
    for p in (p1, p2, p3):
        _check_loss(p)
    _check_age(delta)
    pairs = ((p1, p2, "p1", "p2"), (p1, p3, "p1", "p3"), (p2, p3, "p2", "p3"))
    for a, b, na, nb in pairs:
        if abs(a - b) <= EQUAL_RATE_EPS:
            raise DegenerateRatesError(
                f"{na}={a!r} and {nb}={b!r} coincide; use pmf_dp instead")
    scale = (1.0 - p1) * (1.0 - p2) * (1.0 - p3) / (p2 - p1)
    acc = 0.0
    for sign, pj in ((-1.0, p1), (1.0, p2)):
        acc += sign * pj * (p3 ** (delta + 1) - pj ** (delta + 1)) / (p3 - pj)
    return scale * acc


def pmf_recursive_literal(delta: int, path: PathConfig) -> float:
    """Pr[age = delta] via the recursive convolution sum, memoized.

    Base case ``(1 - p_1) * p_1**d`` for one hop; otherwise
    ``sum_{d'=0..d} (1 - p_n) * p_n**(d - d') * f(d', n-1)``.  Subproblems are
    cached on (age, hop), which brings the cost down from exponential to
    O(hops * delta**2); the plain recursion would re-derive every lower hop's
    value once per summand.
    """
    _check_age(delta)
    probs = path.loss_probs
    memo: dict[tuple[int, int], float] = {}

    def f(d: int, n: int) -> float:
        if n == 1:
            return (1.0 - probs[0]) * probs[0] ** d
        key = (d, n)
        if key in memo:
            return memo[key]
        pn = probs[n - 1]
        acc = 0.0
        for d_prev in range(d + 1):
            acc += (1.0 - pn) * pn ** (d - d_prev) * f(d_prev, n - 1)
        memo[key] = acc
        return acc

    return f(delta, len(probs))


def pmf_dp(path: PathConfig, delta_max: int) -> AgePmf:
    """Full pmf for ages 0..delta_max in O(hops * delta_max) operations.

    The first hop's geometric row is filled with a running product (never
    repeated exponentiation, keeping per-entry rounding error O(delta) ulp);
    every further hop applies the first-order recurrence
    ``f(d, n) = p_n * f(d-1, n) + (1 - p_n) * f(d, n-1)``, evaluated as an IIR
    filter.  Leftover mass above the horizon becomes ``tail_mass``.
    """
    _check_age(delta_max)
    p1 = path.loss_probs[0]
    row = np.empty(delta_max + 1)
    row[0] = 1.0
    row[1:] = p1
    row = (1.0 - p1) * np.cumprod(row)
    for pn in path.loss_probs[1:]:
        row = lfilter([1.0 - pn], [1.0, -pn], row)
    tail = max(0.0, 1.0 - float(row.sum()))
    return AgePmf(row, tail)


def pmf_auto_truncate(path: PathConfig, tail_tol: float,
                      max_delta: int = DEFAULT_MAX_DELTA) -> AgePmf:
    """Smallest-horizon pmf whose tail mass is below ``tail_tol``.

    Probes horizons 64, 128, 256, ... (the tail decays geometrically at the
    dominant loss rate, so doubling terminates after O(log) probes), then
    trims the result to the first age whose upward mass is already below the
    tolerance.  Raises :class:`HorizonOverflowError` once the probe horizon
    would exceed ``max_delta``.
    """
    if not 0.0 < tail_tol < 1.0:
        raise ValueError(f"tail tolerance {tail_tol!r} must lie in (0, 1)")
    horizon = min(_FIRST_HORIZON, max_delta)
    while True:
        pmf = pmf_dp(path, horizon)
        if pmf.tail_mass < tail_tol:
            return _trim(pmf, tail_tol)
        if horizon >= max_delta:
            raise HorizonOverflowError(
                f"tail mass still {pmf.tail_mass:.3e} at the horizon cap "
                f"{max_delta}; required < {tail_tol:.3e}")
        horizon = min(horizon * 2, max_delta)


def _trim(pmf: AgePmf, tail_tol: float) -> AgePmf:
    """Cut trailing entries while the mass above the cut stays below tail_tol."""
    above = np.empty(pmf.probs.size)
    above[:-1] = np.cumsum(pmf.probs[::-1])[::-1][1:]
    above[-1] = 0.0
    above += pmf.tail_mass
    keep = int(np.argmax(above < tail_tol))
    if keep == pmf.delta_max:
        return pmf
    return AgePmf(pmf.probs[:keep + 1], float(above[keep]))


def expected_age(path: PathConfig) -> float:
    """Exact mean receiver age: sum over links of p / (1 - p)."""
    return float(sum(p / (1.0 - p) for p in path.loss_probs))


def ccdf(pmf: AgePmf, delta: int) -> float:
    """Pr[age > delta] under a truncated pmf.

    Valid only up to the truncation horizon; beyond it the split between the
    individual ages is unknown and :class:`OutOfHorizonError` is raised.
    """
    _check_age(delta)
    if delta > pmf.delta_max:
        raise OutOfHorizonError(
            f"age {delta} exceeds the pmf horizon {pmf.delta_max}")
    return pmf.tail_mass + float(pmf.probs[delta + 1:].sum())


def icdf(path: PathConfig, query: QuantileQuery,
         max_delta: int = DEFAULT_MAX_DELTA) -> list[int]:
    """Smallest age meeting each reliability target: min d with Pr[age > d] <= eps.

    The pmf is auto-truncated with a tolerance of ``min(targets) / 100`` so
    every answer is resolved well inside the computed horizon.
    """
    pmf = pmf_auto_truncate(path, min(query.targets) / 100.0, max_delta)
    above = np.empty(pmf.probs.size)
    above[:-1] = np.cumsum(pmf.probs[::-1])[::-1][1:]
    above[-1] = 0.0
    above += pmf.tail_mass
    ascending = above[::-1]
    ages = []
    for eps in query.targets:
        count = int(np.searchsorted(ascending, eps, side="right"))
        ages.append(pmf.probs.size - count)
    return ages
