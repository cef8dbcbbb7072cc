"""
Samplers
Pareto loads by inverse transform and the light-tailed interval families.
"""

import numpy as np

from ..errors import InvalidArgumentError
from ..models.simulation import HeavyTailSpec, LightTailFamily, LightTailSpec


def sample_heavy(spec: HeavyTailSpec, rng: np.random.Generator, size: int, integer: bool = False) -> np.ndarray:
    """
    Pareto draws Y = scale * U^(-1/p), U uniform on (0, 1]

    Args:
        spec: Tail exponent and scale
        rng: Generator
        size: Number of draws
        integer: Round up to integers (also implied by spec.integer_valued)

    Returns:
        float64 array, or int64 when rounding up
    """
    if size < 0:
        raise InvalidArgumentError("sample size must be nonnegative", size=size)
    uniforms = 1.0 - rng.random(size)
    draws = spec.scale * uniforms ** (-1.0 / spec.p)
    if integer or spec.integer_valued:
        return np.ceil(draws).astype(np.int64)
    return draws


def sample_light(spec: LightTailSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    """
    Nonnegative real draws of a light-tailed family

    Returns:
        float64 array of the given size
    """
    mean = spec.mean
    if spec.family == LightTailFamily.EXPONENTIAL:
        return rng.exponential(mean, size)
    if spec.family == LightTailFamily.UNIFORM:
        return rng.uniform(mean * (1.0 - spec.spread), mean * (1.0 + spec.spread), size)
    if spec.family == LightTailFamily.GAUSSIAN:
        return np.maximum(rng.normal(mean, np.sqrt(spec.spread * mean), size), 0.0)
    return np.full(size, float(mean))


def sample_intervals(spec: LightTailSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    """
    Integer interval lengths ≥ 1 (bins) with the requested mean

    Exponential lengths are geometric on {1, 2, ...}; the other families are
    rounded and floored at 1.
    """
    if spec.family == LightTailFamily.EXPONENTIAL:
        return rng.geometric(1.0 / spec.mean, size).astype(np.int64)
    draws = np.rint(sample_light(spec, rng, size)).astype(np.int64)
    return np.maximum(draws, 1)
