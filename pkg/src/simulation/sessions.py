"""
Multiscale sessions
RTT spike vectors, alternating level vectors and their product.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..errors import InvalidArgumentError
from ..models.simulation import LevelSpec, LightTailSpec
from ..models.trace import SessionBitmap
from .distributions import sample_intervals, sample_light
from .rng import SeededStreams

logger = structlog.get_logger(__name__)


def rtt_spike_vector(rtt: Optional[LightTailSpec], bins: int, rng: np.random.Generator) -> np.ndarray:
    """
    Isolated 1s separated by runs of ⌈RTT⌉ ≥ 1 zeros, random phase

    Args:
        rtt: RTT law in bins; None gives all ones (no RTT structure)
        bins: Vector length
        rng: Generator

    Returns:
        uint8 vector
    """
    if rtt is None:
        return np.ones(bins, dtype=np.uint8)

    batch = int(bins / (rtt.mean + 1.0)) + 16
    spacings = np.maximum(np.ceil(sample_light(rtt, rng, batch)), 1).astype(np.int64) + 1
    shift = int(rng.integers(0, spacings[0]))
    # the shifted spikes must still reach past the last bin
    while spacings.sum() - shift < bins + 1:
        gaps = np.maximum(np.ceil(sample_light(rtt, rng, batch)), 1).astype(np.int64)
        spacings = np.concatenate([spacings, gaps + 1])

    positions = np.cumsum(spacings) - 1 - shift
    vector = np.zeros(bins, dtype=np.uint8)
    vector[positions[positions < bins]] = 1
    return vector


def level_vector(level: LevelSpec, bins: int, rng: np.random.Generator) -> np.ndarray:
    """
    Alternating runs of 1s and 0s with independent integer lengths

    The starting state is 1 with probability on_mean / (on_mean + off_mean) and the
    first run is cut at a uniform point, so the vector starts mid-interval.

    Returns:
        uint8 vector of the given length
    """
    starts_on = bool(rng.random() < level.on_mean / (level.on_mean + level.off_mean))
    first, second = (level.on_dist, level.off_dist) if starts_on else (level.off_dist, level.on_dist)

    pairs = int(bins / (level.on_mean + level.off_mean)) + 8
    lengths = np.zeros(0, dtype=np.int64)
    while lengths.sum() < bins:
        chunk = np.empty(2 * pairs, dtype=np.int64)
        chunk[0::2] = sample_intervals(first, rng, pairs)
        chunk[1::2] = sample_intervals(second, rng, pairs)
        if lengths.shape[0] == 0:
            # cut the first run before counting coverage
            chunk[0] = rng.integers(1, chunk[0] + 1)
        lengths = np.concatenate([lengths, chunk])

    states = np.zeros(lengths.shape[0], dtype=np.uint8)
    states[0::2] = 1 if starts_on else 0
    states[1::2] = 0 if starts_on else 1
    return np.repeat(states, lengths)[:bins]


def session_vectors(
    levels: Sequence[LevelSpec],
    rtt: Optional[LightTailSpec],
    bins: int,
    streams: SeededStreams,
    user: int = 0,
) -> Tuple[np.ndarray, List[np.ndarray]]:
    """
    Component vectors of one session, each from its own stream

    Returns:
        (RTT spike vector, level vectors coarse to fine)
    """
    if not levels:
        raise InvalidArgumentError("a session needs at least one level")
    spikes = rtt_spike_vector(rtt, bins, streams.stream("rtt", user))
    vectors = [
        level_vector(level, bins, streams.stream(f"level-{index}", user))
        for index, level in enumerate(levels)
    ]
    return spikes, vectors


def simulate_session_levels(
    levels: Sequence[LevelSpec],
    rtt: Optional[LightTailSpec],
    bins: int,
    seed: int,
    user: int = 0,
    bin_width: float = 0.001,
) -> SessionBitmap:
    """
    One multiscale session: the product of the RTT spike vector and every level vector

    Args:
        levels: Levels, coarse to fine
        rtt: RTT law in bins, or None for sessions without RTT spikes
        bins: Session length
        seed: Run seed
        user: Session index (selects independent streams)
        bin_width: Nominal bin width attached to the bitmap

    Returns:
        SessionBitmap, deterministic in (seed, user)
    """
    spikes, vectors = session_vectors(levels, rtt, bins, SeededStreams(seed), user)
    bits = spikes.copy()
    for vector in vectors:
        bits *= vector
    logger.debug("Session simulated", user=user, bins=bins, levels=len(levels), ones=int(bits.sum()))
    return SessionBitmap(bin_width=bin_width, bits=bits)
