"""
Slow Start emission schedule
Weights 1, 2, 4, ... capped at M, the last emission carrying the remainder of the load.
"""

import math
from typing import List, Sequence, Tuple

import numpy as np

from ..errors import InvalidArgumentError
from ..models.simulation import HeavyTailSpec
from .distributions import sample_heavy


def _doubling_steps(max_weight: int) -> int:
    """Number of weights 2^k strictly below M"""
    if max_weight < 1:
        raise InvalidArgumentError("slow start maximum must be ≥ 1", max_weight=max_weight)
    return (int(max_weight) - 1).bit_length()


def slow_start_schedule(load: int, max_weight: int) -> List[int]:
    """
    Emission weights of one session

    Args:
        load: Total load L ≥ 1
        max_weight: Cap M ≥ 1

    Returns:
        [min(2^k, M) for k = 0, 1, ...] truncated so the weights sum to L exactly
    """
    if load < 1:
        raise InvalidArgumentError("load must be ≥ 1", load=load)
    steps = _doubling_steps(max_weight)
    weights = []
    remaining = int(load)
    k = 0
    while remaining > 0:
        weight = min(2 ** k if k < steps else max_weight, remaining)
        weights.append(weight)
        remaining -= weight
        k += 1
    return weights


def phi(load: int, max_weight: int) -> int:
    """Closed-form emission count ⌊log2(L∧M) + (L-2M+1)_+ / M⌋ + 1 (no partial final emission)"""
    if load < 1:
        raise InvalidArgumentError("load must be ≥ 1", load=load)
    head = math.log2(min(load, max_weight))
    tail = max(load - 2 * max_weight + 1, 0) / max_weight
    return int(math.floor(head + tail)) + 1


def slow_start_counts(loads: np.ndarray, max_weight: int) -> np.ndarray:
    """Emission count of every load under the truncating schedule"""
    loads = np.asarray(loads, dtype=np.int64)
    if np.any(loads < 1):
        raise InvalidArgumentError("loads must be ≥ 1")
    steps = _doubling_steps(max_weight)
    head = 2 ** steps - 1
    # bit length of L for loads covered by the doubling phase
    doubling = np.frexp(loads.astype(np.float64))[1].astype(np.int64)
    capped = steps + -(-(loads - head) // max_weight)
    return np.where(loads <= head, doubling, capped)


def emission_weights(loads: np.ndarray, index: np.ndarray, max_weight: int) -> np.ndarray:
    """
    Weight of emission number `index` (from 0) in a session of load `loads`

    Args:
        loads: Session load per emission
        index: Position of the emission in its session
        max_weight: Cap M

    Returns:
        int64 weights; the final emission of a session carries the remainder
    """
    steps = _doubling_steps(max_weight)
    k = np.asarray(index, dtype=np.int64)
    doubling = k < steps
    power = np.left_shift(np.int64(1), np.minimum(k, steps))
    standard = np.where(doubling, power, max_weight)
    emitted = np.where(doubling, power - 1, (2 ** steps - 1) + (k - steps) * max_weight)
    return np.minimum(standard, np.asarray(loads, dtype=np.int64) - emitted)


def slow_start_weights(loads: np.ndarray, max_weight: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Full schedules of many sessions, flattened

    Returns:
        (session index per emission, weight per emission)
    """
    loads = np.asarray(loads, dtype=np.int64)
    counts = slow_start_counts(loads, max_weight)
    session = np.repeat(np.arange(loads.shape[0]), counts)
    starts = np.cumsum(counts) - counts
    index = np.arange(session.shape[0]) - starts[session]
    return session, emission_weights(loads[session], index, max_weight)


def assign_slow_start_weights(
    segment_lengths: Sequence[int],
    budget: HeavyTailSpec,
    max_weight: int,
    rng: np.random.Generator,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Walk emission slots segment by segment, opening a new session on budget exhaustion
    and at every segment start

    Args:
        segment_lengths: Consecutive runs of emission slots
        budget: Heavy-tailed law of the per-session budget N
        max_weight: Cap M
        rng: Generator for the budgets

    Returns:
        (weight per slot, session id per slot, budget per session)
    """
    weights, sessions, budgets = [], [], []
    mean_count = max(1.0, math.log2(max(budget.mean, 1.0)) + budget.mean / max_weight)
    session_offset = 0

    for length in segment_lengths:
        length = int(length)
        if length <= 0:
            continue
        drawn = np.zeros(0, dtype=np.int64)
        counts = np.zeros(0, dtype=np.int64)
        while counts.sum() < length:
            batch = sample_heavy(budget, rng, int(length / mean_count) + 4, integer=True)
            drawn = np.concatenate([drawn, batch])
            counts = np.concatenate([counts, slow_start_counts(batch, max_weight)])

        # only the slots of this segment are materialized; the last session may be cut
        ends = np.cumsum(counts)
        used = int(np.searchsorted(ends, length)) + 1
        kept = counts[:used].copy()
        kept[-1] -= ends[used - 1] - length
        session = np.repeat(np.arange(used), kept)
        index = np.arange(length) - (ends[:used] - counts[:used])[session]

        weights.append(emission_weights(drawn[session], index, max_weight))
        sessions.append(session + session_offset)
        budgets.append(drawn[:used])
        session_offset += used

    if not weights:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty
    return np.concatenate(weights), np.concatenate(sessions), np.concatenate(budgets)
