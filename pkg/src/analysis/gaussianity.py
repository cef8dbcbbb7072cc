"""
Gaussianity of marginals
Kolmogorov distance to N(0,1), windowed distances and their correlation with traffic.
"""

from typing import Optional, Union

import numpy as np
import structlog
from numpy.typing import ArrayLike
from scipy.special import ndtr

from ..errors import DegenerateInputError, InsufficientDataError, InvalidArgumentError
from ..models.statistics import EmpiricalCdf, KolmogorovSeries
from ..models.trace import BinnedTrace

logger = structlog.get_logger(__name__)

GAUSSIAN_THRESHOLD = 0.08
INTERMEDIATE_THRESHOLD = 0.1
FAR_THRESHOLD = 0.2


def _sup_distance(sorted_rows: np.ndarray) -> np.ndarray:
    """
    sup_x |F_n(x) - Φ(x)| per row of sorted samples

    Both one-sided gaps are taken at every order statistic; with ties the
    upper gap of the last tied sample and the lower gap of the first one cover
    the jump.
    """
    n = sorted_rows.shape[-1]
    cdf = ndtr(sorted_rows)
    ranks = np.arange(1, n + 1, dtype=np.float64)
    above = ranks / n - cdf
    below = cdf - (ranks - 1) / n
    return np.maximum(above.max(axis=-1), below.max(axis=-1))


def empirical_cdf(samples: ArrayLike) -> EmpiricalCdf:
    """Empirical marginal distribution of the samples"""
    values = np.sort(np.asarray(samples, dtype=np.float64))
    if values.shape[0] == 0:
        raise InvalidArgumentError("empirical CDF of an empty sample")
    return EmpiricalCdf(sorted_samples=values)


def kolmogorov_to_normal(samples: ArrayLike, normalize: bool = True) -> float:
    """
    Kolmogorov distance between the empirical marginal and N(0,1)

    Args:
        samples: At least 2 values
        normalize: Center and scale to unit standard deviation first

    Returns:
        d_K in [0, 1]
    """
    values = np.asarray(samples, dtype=np.float64).ravel()
    if values.shape[0] < 2:
        raise InvalidArgumentError("Kolmogorov distance needs at least 2 samples", n=int(values.shape[0]))
    if normalize:
        if np.ptp(values) == 0:
            raise DegenerateInputError("sample has zero variance")
        values = (values - values.mean()) / values.std()
    return float(_sup_distance(np.sort(values)))


def _normalized_rows(rows: np.ndarray) -> tuple:
    """Per-row standardization; returns (rows, degenerate mask)"""
    degenerate = np.ptp(rows, axis=1) == 0
    means = rows.mean(axis=1, keepdims=True)
    stds = rows.std(axis=1, keepdims=True)
    stds[degenerate] = 1.0
    return (rows - means) / stds, degenerate


def window_distances(values: ArrayLike, window: int) -> tuple:
    """
    Kolmogorov distance and raw sum of every full window

    Returns:
        (distances with NaN for constant windows, window sums)
    """
    series = np.asarray(values, dtype=np.float64)
    count = series.shape[0] // window
    rows = series[: count * window].reshape(count, window)
    normalized, degenerate = _normalized_rows(rows)
    distances = _sup_distance(np.sort(normalized, axis=1))
    distances[degenerate] = np.nan
    return distances, rows.sum(axis=1)


def windowed_kolmogorov(x: Union[BinnedTrace, ArrayLike], window: int = 512) -> KolmogorovSeries:
    """
    Kolmogorov distances of consecutive non-overlapping windows

    Args:
        x: Binned trace (or plain series), at least 2 windows long
        window: Window size in bins

    Returns:
        KolmogorovSeries; each window normalized by its own mean and std,
        the trailing partial window dropped
    """
    values = x.values if isinstance(x, BinnedTrace) else np.asarray(x, dtype=np.float64)
    if window < 2:
        raise InvalidArgumentError("window must hold at least 2 bins", window=window)
    if values.shape[0] < 2 * window:
        raise InsufficientDataError(
            "series shorter than two windows", length=int(values.shape[0]), window=window
        )

    distances, traffic = window_distances(values, window)
    series = KolmogorovSeries(window_size=window, distances=distances, window_traffic=traffic)
    if series.missing_count:
        logger.warning("Degenerate windows skipped", window=window, missing=series.missing_count)
    return series


def distance_traffic_correlation(series: KolmogorovSeries) -> float:
    """
    Pearson correlation between window distances and window traffic

    Args:
        series: Windowed distances; missing windows are dropped pairwise

    Returns:
        Correlation in [-1, 1]
    """
    return pearson(series.distances, series.window_traffic)


def pearson(first: ArrayLike, second: ArrayLike) -> float:
    """Pearson correlation over the pairs where both values are finite"""
    a = np.asarray(first, dtype=np.float64)
    b = np.asarray(second, dtype=np.float64)
    keep = np.isfinite(a) & np.isfinite(b)
    if np.count_nonzero(keep) < 3:
        raise InsufficientDataError("need at least 3 usable pairs", pairs=int(np.count_nonzero(keep)))
    a, b = a[keep], b[keep]
    if np.ptp(a) == 0 or np.ptp(b) == 0:
        raise DegenerateInputError("correlation with a constant sequence is undefined")
    return float(np.clip(np.corrcoef(a, b)[0, 1], -1.0, 1.0))


def oscillation_amplitude(series: KolmogorovSeries, relative: bool = True) -> float:
    """
    Spread max - min of the window distances

    Args:
        series: Windowed distances
        relative: Divide by the mean distance

    Returns:
        Absolute or relative oscillation amplitude
    """
    finite = series.distances[series.valid_mask]
    if finite.size == 0:
        raise DegenerateInputError("no usable windows")
    amplitude = float(finite.max() - finite.min())
    return amplitude / float(finite.mean()) if relative else amplitude


def classify_distance(
    distance: float,
    gaussian: float = GAUSSIAN_THRESHOLD,
    intermediate: float = INTERMEDIATE_THRESHOLD,
    far: float = FAR_THRESHOLD,
) -> str:
    """
    Calibration regime of a Kolmogorov distance

    Returns:
        "gaussian" below the first threshold, "borderline" up to the second,
        "intermediate" below the far threshold, "far" from there on
    """
    if distance < gaussian:
        return "gaussian"
    if distance < intermediate:
        return "borderline"
    if distance < far:
        return "intermediate"
    return "far"


def mean_distance(series: KolmogorovSeries) -> Optional[float]:
    """Mean over usable windows, None if every window is degenerate"""
    finite = series.distances[series.valid_mask]
    return float(finite.mean()) if finite.size else None
