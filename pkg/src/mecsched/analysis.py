"""Closed-form expectations, feasibility regimes, and performance bounds.

This module carries the quantities the simulator is checked against:

- exact expected uplink bits per task for both execution modes under
  i.i.d. content draws,
- seeded Monte Carlo estimates of the mean busy-slot counts,
- the minimum achievable long-run data average and its feasibility
  regime as a function of the arrival rate,
- the additive optimality-gap bound of the drift-plus-penalty rule and
  the constant behind it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .catalog import CacheConfig, ContentCatalog
from .dynamics import SystemParams, slots_local, slots_mec
from .workload import Task, sample_content_indices

__all__ = [
    "uniform_k_dist",
    "expected_mec_bits",
    "expected_local_bits",
    "SlotMeanEstimate",
    "estimate_slot_means",
    "RegimeReport",
    "REGIME_LOCAL_ONLY",
    "REGIME_MIXED",
    "REGIME_INFEASIBLE",
    "optimal_average_data",
    "optimality_gap_bound",
    "drift_bound_constant",
]

REGIME_LOCAL_ONLY = "local_only_optimal"
REGIME_MIXED = "mixed"
REGIME_INFEASIBLE = "infeasible"


def uniform_k_dist(k_min: int, k_max: int) -> dict[int, float]:
    """Uniform distribution over the contents-per-task counts ``k_min..k_max``."""
    if k_min < 1 or k_max < k_min:
        raise ValueError(f"need 1 <= k_min <= k_max, got ({k_min}, {k_max})")
    n = k_max - k_min + 1
    return {k: 1.0 / n for k in range(k_min, k_max + 1)}


def _check_k_dist(k_dist: Mapping[int, float]) -> None:
    if not k_dist:
        raise ValueError("empty contents-per-task distribution")
    if any(k < 1 for k in k_dist):
        raise ValueError("contents-per-task counts must be at least 1")
    total = sum(k_dist.values())
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"contents-per-task probabilities sum to {total!r}, expected 1")


def expected_mec_bits(size_bits: float, k_dist: Mapping[int, float]) -> float:
    """Expected uplink bits per offloaded task.

    An offloaded task ships all of its ``k`` contents, so this is just
    ``size_bits * E[k]``.

    Parameters
    ----------
    size_bits : float
        Size of one content in bits.
    k_dist : mapping of int to float
        Distribution of the contents-per-task count.
    """
    _check_k_dist(k_dist)
    return size_bits * sum(k * p for k, p in k_dist.items())


def expected_local_bits(
    size_bits: float,
    popularity: np.ndarray,
    capacity: int,
    k_dist: Mapping[int, float],
) -> float:
    """Expected uplink bits per locally executed task.

    A local task fetches each uncached content rank at most once, so with
    i.i.d. draws the expected distinct-uncached count for a task of ``k``
    contents is ``sum_n (1 - (1 - p_n)^k)`` over the uncached ranks ``n``.
    The returned value averages that over ``k_dist`` and scales by the
    content size; it is exact, not an approximation.

    Parameters
    ----------
    size_bits : float
        Size of one content in bits.
    popularity : numpy.ndarray
        Per-rank request probabilities.
    capacity : int
        Cache capacity in contents; ranks ``1..capacity`` are never fetched.
    k_dist : mapping of int to float
        Distribution of the contents-per-task count.
    """
    _check_k_dist(k_dist)
    pop = np.asarray(popularity, dtype=np.float64)
    if not 0 <= capacity <= len(pop):
        raise ValueError(f"capacity {capacity} outside 0..{len(pop)}")
    miss = 1.0 - pop[capacity:]
    if miss.size == 0:
        return 0.0
    ks = np.array(sorted(k_dist), dtype=np.float64)
    probs = np.array([k_dist[int(k)] for k in ks])
    # expected distinct uncached contents for each k, then average over k
    distinct = (1.0 - np.power.outer(miss, ks)).sum(axis=0)
    return size_bits * float(np.dot(probs, distinct))


@dataclass(frozen=True)
class SlotMeanEstimate:
    """Monte Carlo means of the per-task busy-slot counts.

    ``local_mean`` / ``mec_mean`` estimate the expected whole-slot counts
    of the two execution modes; the ``*_se`` fields are standard errors of
    those means over ``samples`` independently drawn tasks.
    """

    local_mean: float
    mec_mean: float
    local_se: float
    mec_se: float
    samples: int


def estimate_slot_means(
    catalog: ContentCatalog,
    cache: CacheConfig,
    params: SystemParams,
    k_dist: Mapping[int, float],
    samples: int = 20000,
    seed: int = 0,
) -> SlotMeanEstimate:
    """Estimate the mean busy-slot counts by sampling tasks.

    Tasks are drawn exactly as the workload generator draws them (size
    from ``k_dist``, contents i.i.d. from the catalog popularity) and
    pushed through the same slot-count formulas the simulator uses, so
    the estimate is the canonical evaluator for quantities that have no
    closed form.  Deterministic given ``seed``.
    """
    if samples < 2:
        raise ValueError(f"need at least 2 samples for a standard error, got {samples}")
    _check_k_dist(k_dist)
    rng = np.random.default_rng(seed)
    ks = np.array(sorted(k_dist), dtype=np.int64)
    probs = np.array([k_dist[int(k)] for k in ks])
    drawn_ks = rng.choice(ks, size=samples, p=probs)
    local_counts = np.empty(samples, dtype=np.float64)
    mec_counts = np.empty(samples, dtype=np.float64)
    for i in range(samples):
        k = int(drawn_ks[i])
        task = Task(
            id=i,
            arrival_slot=i,
            contents=sample_content_indices(rng, catalog, k),
            total_bits=catalog.size_bits * k,
        )
        local_counts[i] = slots_local(task, cache, catalog, params)
        mec_counts[i] = slots_mec(task, params)
    return SlotMeanEstimate(
        local_mean=float(local_counts.mean()),
        mec_mean=float(mec_counts.mean()),
        local_se=float(local_counts.std(ddof=1) / math.sqrt(samples)),
        mec_se=float(mec_counts.std(ddof=1) / math.sqrt(samples)),
        samples=samples,
    )


@dataclass(frozen=True)
class RegimeReport:
    """Feasibility regime and minimum long-run data average.

    ``optimal_bits`` is ``None`` exactly when the regime is infeasible.
    ``mean_compute_bits`` equals ``mean_mec_bits`` because local execution
    always computes the full task; it is reported separately for clarity.
    """

    local_slot_mean: float
    mec_slot_mean: float
    regime: str
    optimal_bits: Optional[float]
    mean_mec_bits: float
    mean_local_bits: float
    mean_compute_bits: float


def _mixed_regime_bits(
    local_slot_mean: float, arrival_prob: float, mec_bits_mean: float, local_bits_mean: float
) -> float:
    """Data average when local capacity is saturated and the edge server
    absorbs the rest: the local share ``1 / (arrival_prob * local_slot_mean)``
    of tasks ships the local bits, the remainder ships full tasks.  At a
    local share of exactly 1 this reduces to ``local_bits_mean``."""
    share = 1.0 / (arrival_prob * local_slot_mean)
    return mec_bits_mean - share * (mec_bits_mean - local_bits_mean)


def optimal_average_data(
    local_slot_mean: float,
    mec_slot_mean: float,
    arrival_prob: float,
    mec_bits_mean: float,
    local_bits_mean: float,
) -> RegimeReport:
    """Minimum achievable long-run uplink bits per task, with its regime.

    Three regimes, by comparing the arrival rate with the service rates
    ``1 / local_slot_mean`` and ``1 / mec_slot_mean``:

    - local capacity alone covers the arrivals: run everything locally,
      the optimum is the mean local bits;
    - local capacity is short but both processors together cover the
      arrivals: saturate local, offload the overflow (mixed formula);
    - otherwise the arrival rate exceeds total capacity: infeasible, no
      finite-queue schedule exists and ``optimal_bits`` is ``None``.
    """
    if local_slot_mean < 1 or mec_slot_mean < 1:
        raise ValueError(
            f"slot means must be at least 1, got ({local_slot_mean}, {mec_slot_mean})"
        )
    if not 0 < arrival_prob <= 1:
        raise ValueError(f"arrival_prob must lie in (0, 1], got {arrival_prob}")
    if mec_bits_mean < 0 or local_bits_mean < 0:
        raise ValueError("mean bit sizes must be non-negative")

    if 1.0 / local_slot_mean >= arrival_prob:
        regime, optimal = REGIME_LOCAL_ONLY, local_bits_mean
    elif 1.0 / local_slot_mean + 1.0 / mec_slot_mean >= arrival_prob:
        regime = REGIME_MIXED
        optimal = _mixed_regime_bits(local_slot_mean, arrival_prob, mec_bits_mean, local_bits_mean)
    else:
        regime, optimal = REGIME_INFEASIBLE, None
    return RegimeReport(
        local_slot_mean=local_slot_mean,
        mec_slot_mean=mec_slot_mean,
        regime=regime,
        optimal_bits=optimal,
        mean_mec_bits=mec_bits_mean,
        mean_local_bits=local_bits_mean,
        mean_compute_bits=mec_bits_mean,
    )


def optimality_gap_bound(v: float) -> float:
    """Additive bound on how far the drift-plus-penalty rule's long-run
    data average can sit above the optimum: ``5 / (2 v)``.

    ``v`` is the policy weight in 1/bits, so the bound is in bits.  At
    ``v = 0`` the policy ignores data entirely and the bound is infinite.
    """
    if v < 0:
        raise ValueError(f"v must be non-negative, got {v}")
    if v == 0:
        return math.inf
    return 5.0 / (2.0 * v)


def drift_bound_constant(q_len: int, arrival: int) -> float:
    """The per-slot constant bounding the squared-queue drift:
    ``(5 + 2 * q_len * arrival) / 2``.

    With at most two departures and one arrival per slot the squared
    terms never exceed 5/2 and the cross term adds ``q_len * arrival``.
    """
    return (5.0 + 2.0 * q_len * arrival) / 2.0
