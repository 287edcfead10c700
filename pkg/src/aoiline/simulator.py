"""Discrete-time Monte Carlo simulation of age over a lossy line path.

Every sampling period each link n independently succeeds with probability
1 - p_n.  Links fire in path order within the period, so a relay that just
received a packet can forward it downstream in the same period; the receiver
age is read once per period after the last link has fired.

Randomness contract: repetition r of a run with seed s draws from
``numpy.random.default_rng(SeedSequence(entropy=s, spawn_key=(r,)))`` one
uniform matrix of shape (periods, hops); link n succeeds in period k iff
``u[k, n] < 1 - p_n``.  Results are therefore a pure function of the
configuration, independent of thread count and of the order in which
repetitions execute.  Bit-compatibility across numpy generations is not
guaranteed, only within a build.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import PathConfig


@dataclass(frozen=True)
class SimConfig:
    """Parameters of one Monte Carlo run."""

    path: PathConfig
    periods: int = 100_000
    repetitions: int = 100
    seed: int = 0
    warmup: int = 0

    def __post_init__(self) -> None:
        if self.periods < 1:
            raise ValueError("periods must be at least 1")
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        if not 0 <= self.warmup < self.periods:
            raise ValueError("warmup must lie in [0, periods)")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


@dataclass
class EmpiricalDist:
    """Observed age frequencies: a sparse map age -> count."""

    counts: dict[int, int]
    total: int

    def __post_init__(self) -> None:
        if any(c < 0 for c in self.counts.values()):
            raise ValueError("counts must be non-negative")
        if self.total != sum(self.counts.values()):
            raise ValueError("total must equal the sum of counts")

    def mean(self) -> float:
        if self.total == 0:
            raise ValueError("empty sample has no mean")
        return sum(d * c for d, c in self.counts.items()) / self.total


@dataclass(frozen=True)
class SimResult:
    """Aggregated statistics of a run; sd fields are across repetitions."""

    empirical: EmpiricalDist
    mean_age: float
    mean_age_sd: float
    mean_peak_age: float
    mean_peak_age_sd: float
    deliveries: int


def step(ages: Sequence[int], outcomes: Sequence[int]) -> tuple[int, ...]:
    """Advance the per-hop age vector by one period, given link outcomes.

    ``ages`` is (age_0, .., age_N) from the previous period with age_0 = 0 at
    the always-fresh source; ``outcomes`` holds one success flag per link.
    Hops update in path order: a successful link copies the upstream age as
    already updated this period, a failed link ages by one.  Deterministic;
    all randomness lives in :func:`run`.
    """
    if len(ages) != len(outcomes) + 1:
        raise ValueError("need one age per hop plus the source")
    if ages[0] != 0:
        raise ValueError("source age must be 0")
    new = [0]
    for n, success in enumerate(outcomes, start=1):
        new.append(new[n - 1] if success else ages[n] + 1)
    return tuple(new)


def _link_successes(config: SimConfig, rep: int) -> np.ndarray:
    """Boolean (periods, hops) success matrix for one repetition's stream."""
    seq = np.random.SeedSequence(entropy=config.seed, spawn_key=(rep,))
    rng = np.random.default_rng(seq)
    u = rng.random((config.periods, config.path.hops))
    return u < (1.0 - np.asarray(config.path.loss_probs))


def _receiver_series(successes: np.ndarray) -> np.ndarray:
    """Receiver age at the end of each period, starting from all-zero ages.

    Exploits that between successes an age grows by one per period: with
    s(k) the most recent success of link n at or before period k, the hop's
    age is upstream(s(k)) + (k - s(k)), and k + 1 before any success.
    """
    periods = successes.shape[0]
    k = np.arange(periods)
    prev = np.zeros(periods, dtype=np.int64)
    for n in range(successes.shape[1]):
        last = np.maximum.accumulate(np.where(successes[:, n], k, -1))
        upstream = prev[np.maximum(last, 0)]
        prev = np.where(last >= 0, upstream + (k - last), k + 1)
    return prev


def _simulate_rep(config: SimConfig, rep: int):
    ages = _receiver_series(_link_successes(config, rep))
    before = np.empty_like(ages)
    before[0] = 0
    before[1:] = ages[:-1]
    resets = ages != before + 1
    w = config.warmup
    window = ages[w:]
    peaks = (before + 1)[w:][resets[w:]]
    return (np.bincount(window),
            int(window.sum()), window.size,
            int(peaks.sum()), peaks.size)


def run(config: SimConfig, threads: int | None = None) -> SimResult:
    """Simulate all repetitions and aggregate their statistics.

    Repetitions own independent RNG streams (see the module docstring) and
    are merged in repetition order, so the result is identical whether they
    execute sequentially or on a thread pool.  ``threads`` defaults to the
    available parallelism.

    A delivery is a period whose receiver age is not the previous age plus
    one, i.e. a fresher packet visibly arrived; the age the receiver had
    just reached before that reset, previous age + 1, is its peak sample.
    """
    reps = range(config.repetitions)
    if threads is None:
        threads = os.cpu_count() or 1
    if threads > 1 and config.repetitions > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda r: _simulate_rep(config, r), reps))
    else:
        results = [_simulate_rep(config, r) for r in reps]

    bincounts, age_sums, age_counts, peak_sums, peak_counts = zip(*results)
    agg = np.zeros(max(b.size for b in bincounts), dtype=np.int64)
    for bincount in bincounts:
        agg[:bincount.size] += bincount
    counts = {int(d): int(c) for d, c in enumerate(agg) if c > 0}
    total = int(agg.sum())

    age_means = [s / n for s, n in zip(age_sums, age_counts)]
    mean_age = float(np.arange(agg.size, dtype=np.int64) @ agg) / total
    mean_age_sd = float(np.std(age_means, ddof=1)) if len(age_means) > 1 else 0.0

    deliveries = sum(peak_counts)
    peak_means = [s / n for s, n in zip(peak_sums, peak_counts) if n > 0]
    if deliveries > 0:
        mean_peak_age = sum(peak_sums) / deliveries
        mean_peak_age_sd = (float(np.std(peak_means, ddof=1))
                            if len(peak_means) > 1 else 0.0)
    else:
        mean_peak_age = math.nan
        mean_peak_age_sd = math.nan

    return SimResult(EmpiricalDist(counts, total), mean_age, mean_age_sd,
                     mean_peak_age, mean_peak_age_sd, deliveries)
