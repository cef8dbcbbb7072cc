"""
Level and burstiness tools
Slope changes and flat regions of Averaging profiles, Gaussian deviation and
burstiness indices of coarse versions of a trace.
"""

from typing import List, Optional, Sequence

import numpy as np
import structlog
from numpy.typing import ArrayLike

from ..errors import DegenerateInputError, InsufficientDataError, InvalidArgumentError
from ..models.profiles import MultiresProfile, ProfileKind
from ..models.statistics import BurstinessReport, FlatRegions, SlopeSeries
from .binning import as_dyadic, block_sums
from .gaussianity import kolmogorov_to_normal, pearson, window_distances

logger = structlog.get_logger(__name__)

DEFAULT_EPSILON = 0.01
DEFAULT_FLAT_THRESHOLD = -0.1
DEFAULT_WINDOW_EXPONENT = 9
MIN_CHANGE = 1e-12


def local_maxima(values: ArrayLike, minimum: float = MIN_CHANGE) -> List[int]:
    """
    Indices of strict local maxima

    A run of equal values counts once, at its leftmost index, when both existing
    neighbours of the run are smaller. NaN entries are missing neighbours, so series
    ends and positions next to a gap are eligible. Values ≤ minimum never qualify.
    """
    series = np.asarray(values, dtype=np.float64)
    maxima = []
    i = 0
    n = series.shape[0]
    while i < n:
        value = series[i]
        if not np.isfinite(value):
            i += 1
            continue
        end = i
        while end + 1 < n and series[end + 1] == value:
            end += 1
        left = series[i - 1] if i > 0 else np.nan
        right = series[end + 1] if end + 1 < n else np.nan
        left_ok = not np.isfinite(left) or left < value
        right_ok = not np.isfinite(right) or right < value
        if left_ok and right_ok and value > minimum:
            maxima.append(i)
        i = end + 1
    return maxima


def _slopes(profile: MultiresProfile, minimum_scales: int) -> tuple:
    if profile.kind != ProfileKind.AVERAGING:
        logger.warning("Slope tool applied to a non-averaging profile", kind=profile.kind.value)
    logs = profile.log2_values()
    usable = int(np.count_nonzero(np.isfinite(logs)))
    if usable < minimum_scales:
        raise InsufficientDataError(
            "profile has too few usable scales", usable=usable, required=minimum_scales
        )
    return profile.scales, np.diff(logs)


def tool1_level_detector(profile: MultiresProfile, epsilon: float = DEFAULT_EPSILON) -> SlopeSeries:
    """
    Relative slope changes of log2 A and their local maxima

    Args:
        profile: Averaging profile with at least 4 nonzero scales
        epsilon: Floor of the slope magnitude in the denominator

    Returns:
        SlopeSeries; slope S at scale j joins j-1 and j, the change at j joins
        the slopes on both sides of j; maxima ranked by decreasing change
    """
    if not epsilon > 0:
        raise InvalidArgumentError("epsilon must be positive", epsilon=epsilon)
    scales, slopes = _slopes(profile, 4)

    before, after = slopes[:-1], slopes[1:]
    denominator = np.maximum(np.minimum(np.abs(before), np.abs(after)), epsilon)
    changes = np.abs(after - before) / denominator

    change_scales = scales[1:-1]
    peaks = local_maxima(changes)
    levels = [int(change_scales[index]) for index in peaks]
    ranked = [int(change_scales[index]) for index in sorted(peaks, key=lambda index: -changes[index])]

    logger.debug("Slope changes computed", scales=int(scales.shape[0]), levels=ranked)
    return SlopeSeries(
        slope_scales=scales[1:],
        slopes=slopes,
        change_scales=change_scales,
        changes=changes,
        epsilon=epsilon,
        levels=levels,
        ranked_levels=ranked,
    )


def tool2_flat_regions(profile: MultiresProfile, threshold: float = DEFAULT_FLAT_THRESHOLD) -> FlatRegions:
    """
    Scales where log2 A decays slower than the threshold

    Args:
        profile: Averaging profile with at least 2 nonzero scales
        threshold: Slope above which a scale counts as flat

    Returns:
        FlatRegions with one flag per slope and inclusive runs of flagged scales
    """
    scales, slopes = _slopes(profile, 2)
    slope_scales = scales[1:]
    flags = [bool(np.isfinite(slope) and slope > threshold) for slope in slopes]

    regions = []
    start: Optional[int] = None
    for index, flag in enumerate(flags):
        if flag and start is None:
            start = index
        if not flag and start is not None:
            regions.append((int(slope_scales[start]), int(slope_scales[index - 1])))
            start = None
    if start is not None:
        regions.append((int(slope_scales[start]), int(slope_scales[-1])))

    return FlatRegions(
        slope_scales=slope_scales,
        slopes=slopes,
        flags=flags,
        threshold=threshold,
        regions=regions,
    )


def _check_scale_count(k: int, m: int, margin: int, strict: bool, **context) -> None:
    if k < 1 or k > m - 1:
        raise InvalidArgumentError("scale count out of range", k=k, m=m)
    if k > m - margin:
        if strict:
            raise InvalidArgumentError(
                "scale count too large for the trace length", k=k, m=m, limit=m - margin, **context
            )
        logger.warning("Scale count beyond recommended limit", k=k, m=m, limit=m - margin, **context)


def tool3_gaussian_deviation(x, k: int, strict: bool = True) -> BurstinessReport:
    """
    Mean Kolmogorov distance of the coarse versions X^0 .. X^(k-1)

    Args:
        x: Dyadic series (DyadicView, BinnedTrace of length 2^m, or array)
        k: Number of coarse versions; at most m - 10 unless strict is off
        strict: Reject k beyond the recommended limit instead of warning

    Returns:
        BurstinessReport with D and per-scale D_j (NaN for constant coarse versions)
    """
    view = as_dyadic(x)
    _check_scale_count(k, view.m, 10, strict)

    distances = np.full(k, np.nan)
    excluded = []
    for scale in range(k):
        coarse = block_sums(view.values, scale)
        if np.ptp(coarse) == 0:
            excluded.append(scale)
            continue
        distances[scale] = kolmogorov_to_normal(coarse)

    if excluded:
        logger.warning("Degenerate coarse versions excluded", scales=excluded)
    if len(excluded) == k:
        raise DegenerateInputError("every coarse version is constant", k=k)

    return BurstinessReport(
        k=k,
        D=float(np.nanmean(distances)),
        per_scale_D=distances,
        excluded_scales=excluded,
    )


def combine_burstiness(correlations: ArrayLike, mean_distances: ArrayLike) -> float:
    """O = Σ C_j D̄_j / Σ D̄_j over the scales where both are defined"""
    c = np.asarray(correlations, dtype=np.float64)
    d = np.asarray(mean_distances, dtype=np.float64)
    keep = np.isfinite(c) & np.isfinite(d)
    weight = float(d[keep].sum())
    if weight <= 0:
        raise DegenerateInputError("mean distances sum to zero")
    return float(np.clip(np.dot(c[keep], d[keep]) / weight, -1.0, 1.0))


def tool4_burstiness(x, k: int, s: int = DEFAULT_WINDOW_EXPONENT, strict: bool = True) -> BurstinessReport:
    """
    Distance-weighted correlation between windowed Kolmogorov distances and window traffic

    Every coarse version is normalized globally, cut into windows of 2^s points, and
    each window is compared with N(0,1) after its own normalization.

    Args:
        x: Dyadic series
        k: Number of coarse versions; at most m - s - 7 unless strict is off
        s: Window exponent; at least 9 unless strict is off
        strict: Reject parameters beyond the recommended limits instead of warning

    Returns:
        BurstinessReport with O, C_j and D̄_j; scales with fewer than 3 windows or
        an undefined correlation are excluded
    """
    view = as_dyadic(x)
    if s < 1:
        raise InvalidArgumentError("window exponent must be positive", s=s)
    if s < DEFAULT_WINDOW_EXPONENT:
        if strict:
            raise InvalidArgumentError("window exponent below the recommended minimum", s=s)
        logger.warning("Window exponent below recommended minimum", s=s)
    _check_scale_count(k, view.m, s + 7, strict, s=s)

    window = 2 ** s
    correlations = np.full(k, np.nan)
    mean_distances = np.full(k, np.nan)
    excluded = []

    for scale in range(k):
        coarse = block_sums(view.values, scale)
        if coarse.shape[0] // window < 3 or np.ptp(coarse) == 0:
            excluded.append(scale)
            continue
        normalized = (coarse - coarse.mean()) / coarse.std()
        distances, traffic = window_distances(normalized, window)
        try:
            correlations[scale] = pearson(distances, traffic)
        except (InsufficientDataError, DegenerateInputError) as e:
            logger.warning("Scale excluded from burstiness", scale=scale, reason=str(e))
            excluded.append(scale)
            continue
        mean_distances[scale] = float(np.nanmean(distances))

    if len(excluded) == k:
        raise InsufficientDataError("no scale has enough usable windows", k=k, s=s)

    return BurstinessReport(
        k=k,
        s=s,
        O=combine_burstiness(correlations, mean_distances),
        per_scale_C=correlations,
        per_scale_Dbar=mean_distances,
        excluded_scales=excluded,
    )


def burstiness_report(x, k: int, s: int = DEFAULT_WINDOW_EXPONENT, strict: bool = True) -> BurstinessReport:
    """Tool 3 and Tool 4 on the same series, merged into one report"""
    return tool3_gaussian_deviation(x, k, strict=strict).merge(tool4_burstiness(x, k, s, strict=strict))


def detect_levels(values: Sequence[float]) -> List[int]:
    """Class indices of the local maxima of an IDA evidence vector"""
    return local_maxima(values, minimum=0.0)
