"""
Traffic simulators
ON/OFF users (model A), packetized sessions (models B and C), multiscale levels
(model D), Slow Start on top of levels, and the baseline presets.
"""

import math
from typing import Callable, Dict, List, Optional

import numpy as np
import structlog

from ..errors import InvalidArgumentError
from ..models.simulation import LightTailFamily, LightTailSpec, ModelKind, SimConfig
from ..models.trace import BinnedTrace
from .distributions import sample_heavy, sample_light
from .rng import SeededStreams
from .sessions import session_vectors
from .slow_start import assign_slow_start_weights, emission_weights, slow_start_counts

logger = structlog.get_logger(__name__)

UNIT_RTT = LightTailSpec(family=LightTailFamily.CONSTANT, mean=1.0)


def _require(config: SimConfig, *kinds: ModelKind) -> None:
    if config.model not in kinds:
        raise InvalidArgumentError(
            "configuration selects another model",
            model=config.model.value,
            expected=[kind.value for kind in kinds],
        )


def _binned(config: SimConfig, values: np.ndarray) -> BinnedTrace:
    return BinnedTrace(bin_width=config.bin_width, values=np.maximum(values, 0.0))


# ---------------------------------------------------------------- model A


def _on_mean(config: SimConfig) -> float:
    return config.on.mean if config.on is not None else config.load.mean


def _on_lengths(config: SimConfig, rng: np.random.Generator, size: int) -> np.ndarray:
    if config.on is not None:
        return sample_light(config.on, rng, size)
    return sample_heavy(config.load, rng, size)


def _on_off_user(config: SimConfig, rng: np.random.Generator, random_heights: bool) -> np.ndarray:
    """
    Binned occupancy of one ON/OFF user starting with an OFF interval

    The stationary version reads the path from u + burn-in onwards, u uniform on
    the first cycle; the occupancy of bin i is the ON time (times height) in [i, i+1).
    """
    horizon = config.bins
    cycle = config.off.mean + _on_mean(config)
    pairs = int(horizon / cycle) + 16

    offs = sample_light(config.off, rng, pairs)
    ons = _on_lengths(config, rng, pairs)
    if config.stationary:
        burn_in = config.burn_in if config.burn_in is not None else 10.0 * cycle
        offset = burn_in + rng.random() * (offs[0] + ons[0])
    else:
        offset = 0.0

    while offs.sum() + ons.sum() < offset + horizon:
        offs = np.concatenate([offs, sample_light(config.off, rng, pairs)])
        ons = np.concatenate([ons, _on_lengths(config, rng, pairs)])

    heights = sample_light(config.heights, rng, ons.shape[0]) if random_heights else np.ones(ons.shape[0])

    lengths = np.empty(2 * ons.shape[0])
    lengths[0::2] = offs
    lengths[1::2] = ons
    mass = np.zeros(2 * ons.shape[0])
    mass[1::2] = ons * heights

    knots = np.concatenate([[0.0], np.cumsum(lengths)])
    cumulative = np.concatenate([[0.0], np.cumsum(mass)])
    edges = offset + np.arange(horizon + 1, dtype=np.float64)
    return np.diff(np.interp(edges, knots, cumulative))


def _sum_users(config: SimConfig, user_trace: Callable[[np.random.Generator], np.ndarray]) -> np.ndarray:
    streams = SeededStreams(config.seed)
    total = np.zeros(config.bins)
    for user in range(config.users):
        total += user_trace(streams.stream("user", user))
    return total


def simulate_model_a(config: SimConfig) -> BinnedTrace:
    """
    Sum of n stationary ON/OFF users with heavy-tailed ON and light-tailed OFF intervals

    Args:
        config: model_a configuration

    Returns:
        BinnedTrace of 2^bins_log2 bins, each value in [0, n]
    """
    _require(config, ModelKind.MODEL_A)
    values = _sum_users(config, lambda rng: _on_off_user(config, rng, random_heights=False))
    logger.info("Model A simulated", users=config.users, bins=config.bins, seed=config.seed)
    return _binned(config, values)


# ---------------------------------------------------------- models B and C


def _expected_count(config: SimConfig, slow_start: bool) -> float:
    if not slow_start:
        return config.load.mean + 0.5
    max_weight = config.slow_start_max
    return math.log2(min(config.load.mean, max_weight) + 1.0) + config.load.mean / max_weight


def _cap_counts(counts: np.ndarray, cap: int) -> np.ndarray:
    """Caps emissions per session at `cap`; a capped session no longer carries its full load"""
    capped = int(np.count_nonzero(counts > cap))
    if capped:
        logger.warning("Session emissions capped", sessions=capped, cap=cap, largest=int(counts.max()))
    return np.minimum(counts, cap)


def _emission_user(
    config: SimConfig,
    rng: np.random.Generator,
    slow_start: bool,
    random_heights: bool,
) -> np.ndarray:
    """
    Binned impulses of one packetized user

    Every cycle is an OFF interval followed by a session of emissions separated by
    RTT gaps; a session ends one RTT after its last emission. Session loads are
    heavy-tailed integers; with Slow Start the k-th emission weighs min(2^k, M),
    the last one the remainder.
    """
    horizon = config.bins
    rtt = config.rtt if config.rtt is not None else UNIT_RTT
    count_cap = int(math.ceil(2 * horizon / rtt.mean)) + 64
    cycle = config.off.mean + _expected_count(config, slow_start) * rtt.mean
    batch = int(min(horizon / cycle + 16, 4096))
    burn_in = config.burn_in if config.burn_in is not None else 10.0 * cycle

    times: List[np.ndarray] = []
    weights: List[np.ndarray] = []
    base = 0.0
    offset: Optional[float] = None if config.stationary else 0.0

    while offset is None or base < offset + horizon:
        offs = sample_light(config.off, rng, batch)
        loads = sample_heavy(config.load, rng, batch, integer=True)
        counts = slow_start_counts(loads, config.slow_start_max) if slow_start else loads
        counts = _cap_counts(counts, count_cap)

        # one OFF gap and `count` RTT gaps per cycle; emissions sit before each RTT gap
        per_cycle = counts + 1
        total = int(per_cycle.sum())
        cycle_start = np.cumsum(per_cycle) - per_cycle
        is_off = np.zeros(total, dtype=bool)
        is_off[cycle_start] = True
        gaps = np.empty(total)
        gaps[is_off] = offs
        gaps[~is_off] = sample_light(rtt, rng, total - batch)
        elapsed = base + np.cumsum(gaps) - gaps

        cycle_of = np.repeat(np.arange(batch), counts)
        emission_times = elapsed[~is_off]
        if slow_start:
            index = np.arange(cycle_of.shape[0]) - (cycle_start - np.arange(batch))[cycle_of]
            weight = emission_weights(loads[cycle_of], index, config.slow_start_max) * config.packet_scale
        else:
            weight = np.ones(emission_times.shape[0])
        if random_heights:
            weight = weight * sample_light(config.heights, rng, batch)[cycle_of]

        if offset is None:
            first_cycle = elapsed[cycle_start[1]] - base if batch > 1 else float(gaps.sum())
            offset = burn_in + rng.random() * first_cycle

        times.append(emission_times)
        weights.append(np.asarray(weight, dtype=np.float64))
        base = float(elapsed[-1] + gaps[-1])

    relative = np.concatenate(times) - offset
    weight = np.concatenate(weights)
    keep = (relative >= 0) & (relative < horizon)
    index = np.floor(relative[keep]).astype(np.int64)
    return np.bincount(index, weights=weight[keep], minlength=horizon)


def simulate_model_b(config: SimConfig) -> BinnedTrace:
    """
    Packetized ON/OFF users: L unit impulses per session, RTT gaps between them

    Args:
        config: model_b configuration

    Returns:
        BinnedTrace of impulse counts per bin
    """
    _require(config, ModelKind.MODEL_B)
    values = _sum_users(config, lambda rng: _emission_user(config, rng, slow_start=False, random_heights=False))
    logger.info("Model B simulated", users=config.users, bins=config.bins, seed=config.seed)
    return _binned(config, values)


def simulate_model_c(config: SimConfig) -> BinnedTrace:
    """
    Packetized users with Slow Start: emission weights 1, 2, 4, ... capped at M,
    scaled by the packet-size factor λ, summing to L per session

    Args:
        config: model_c configuration

    Returns:
        BinnedTrace of emitted weight per bin
    """
    _require(config, ModelKind.MODEL_C)
    values = _sum_users(config, lambda rng: _emission_user(config, rng, slow_start=True, random_heights=False))
    logger.info(
        "Model C simulated",
        users=config.users,
        bins=config.bins,
        max_weight=config.slow_start_max,
        seed=config.seed,
    )
    return _binned(config, values)


# ---------------------------------------------------------- model D and combined


def _user_bitmap(config: SimConfig, streams: SeededStreams, user: int) -> tuple:
    spikes, vectors = session_vectors(config.levels, config.rtt, config.bins, streams, user)
    bits = spikes.copy()
    for vector in vectors:
        bits *= vector
    return bits, vectors


def simulate_model_d(config: SimConfig) -> BinnedTrace:
    """
    Sum of n independent multiscale sessions with unit weights

    Args:
        config: model_d configuration with at least one level

    Returns:
        BinnedTrace with values in {0, ..., n}
    """
    _require(config, ModelKind.MODEL_D)
    streams = SeededStreams(config.seed)
    total = np.zeros(config.bins)
    for user in range(config.users):
        bits, _ = _user_bitmap(config, streams, user)
        total += bits
    logger.info("Model D simulated", users=config.users, bins=config.bins, levels=len(config.levels))
    return _binned(config, total)


def _segments(positions: np.ndarray, coarse: Optional[np.ndarray]) -> np.ndarray:
    """Lengths of runs of emission slots not separated by a zero of the coarse mask"""
    if positions.size == 0:
        return np.zeros(0, dtype=np.int64)
    if coarse is None:
        return np.array([positions.size])
    zeros_before = np.cumsum(coarse == 0)
    breaks = np.flatnonzero(np.diff(zeros_before[positions]) > 0) + 1
    bounds = np.concatenate([[0], breaks, [positions.size]])
    return np.diff(bounds)


def simulate_combined(config: SimConfig) -> BinnedTrace:
    """
    Multiscale sessions whose 1-positions carry Slow Start weights

    Combined: a session walks the 1s with budget N (heavy-tailed) and restarts when
    the budget is exhausted. CombinedRttLevels: additionally restarts whenever the
    gap before a 1 contains a 0 of a level coarser than the rtt_level_count finest ones.

    Args:
        config: combined or combined_rtt_levels configuration

    Returns:
        BinnedTrace of emitted weight per bin (model D exactly when M = 1)
    """
    _require(config, ModelKind.COMBINED, ModelKind.COMBINED_RTT_LEVELS)
    streams = SeededStreams(config.seed)
    total = np.zeros(config.bins)
    coarse_count = len(config.levels) - config.rtt_level_count

    for user in range(config.users):
        bits, vectors = _user_bitmap(config, streams, user)
        positions = np.flatnonzero(bits)

        coarse = None
        if config.model == ModelKind.COMBINED_RTT_LEVELS and coarse_count > 0:
            coarse = np.ones(config.bins, dtype=np.uint8)
            for vector in vectors[:coarse_count]:
                coarse *= vector

        weights, _, _ = assign_slow_start_weights(
            _segments(positions, coarse),
            config.load,
            config.slow_start_max,
            streams.stream("budget", user),
        )
        total[positions] += weights

    logger.info(
        "Combined model simulated",
        model=config.model.value,
        users=config.users,
        bins=config.bins,
        max_weight=config.slow_start_max,
    )
    return _binned(config, total)


# ---------------------------------------------------------------- baselines


def _spike_train(config: SimConfig, rng: np.random.Generator) -> np.ndarray:
    """Poisson-like impulses with light- or heavy-tailed heights scaled by n"""
    horizon = config.bins
    mean_gap = config.spike_interarrival.mean
    batch = int(horizon / mean_gap) + 16
    gaps = sample_light(config.spike_interarrival, rng, batch)
    while gaps.sum() < horizon:
        gaps = np.concatenate([gaps, sample_light(config.spike_interarrival, rng, batch)])
    times = np.cumsum(gaps) - rng.random() * gaps[0]
    if config.spike_heavy is not None:
        heights = sample_heavy(config.spike_heavy, rng, times.shape[0])
    else:
        heights = sample_light(config.spike_heights, rng, times.shape[0])
    keep = (times >= 0) & (times < horizon)
    index = np.floor(times[keep]).astype(np.int64)
    return np.bincount(index, weights=heights[keep] * config.users, minlength=horizon)


def simulate_baseline(config: SimConfig) -> BinnedTrace:
    """
    Baseline simulations
    - rh: model A with a random height per ON interval
    - rh_ht: model A plus a spike train (exponential interarrivals, random heights)
    - arrrh: model B with a random height per session
    - exp_iid / ht_iid: i.i.d. light- / heavy-tailed bins

    Args:
        config: Configuration selecting one of the baselines

    Returns:
        BinnedTrace
    """
    _require(config, ModelKind.RH, ModelKind.RH_HT, ModelKind.ARRRH, ModelKind.EXP_IID, ModelKind.HT_IID)
    streams = SeededStreams(config.seed)

    if config.model == ModelKind.RH:
        values = _sum_users(config, lambda rng: _on_off_user(config, rng, random_heights=True))
    elif config.model == ModelKind.RH_HT:
        values = _sum_users(config, lambda rng: _on_off_user(config, rng, random_heights=False))
        values = values + _spike_train(config, streams.stream("spikes"))
    elif config.model == ModelKind.ARRRH:
        values = _sum_users(config, lambda rng: _emission_user(config, rng, slow_start=False, random_heights=True))
    elif config.model == ModelKind.EXP_IID:
        values = sample_light(config.heights, streams.stream("iid"), config.bins)
    else:
        values = sample_heavy(config.load, streams.stream("iid"), config.bins)

    logger.info("Baseline simulated", model=config.model.value, users=config.users, bins=config.bins)
    return _binned(config, values)


SIMULATORS: Dict[ModelKind, Callable[[SimConfig], BinnedTrace]] = {
    ModelKind.MODEL_A: simulate_model_a,
    ModelKind.MODEL_B: simulate_model_b,
    ModelKind.MODEL_C: simulate_model_c,
    ModelKind.MODEL_D: simulate_model_d,
    ModelKind.COMBINED: simulate_combined,
    ModelKind.COMBINED_RTT_LEVELS: simulate_combined,
    ModelKind.RH: simulate_baseline,
    ModelKind.RH_HT: simulate_baseline,
    ModelKind.ARRRH: simulate_baseline,
    ModelKind.EXP_IID: simulate_baseline,
    ModelKind.HT_IID: simulate_baseline,
}


def simulate(config: SimConfig) -> BinnedTrace:
    """Run the simulator the configuration selects"""
    return SIMULATORS[config.model](config)
