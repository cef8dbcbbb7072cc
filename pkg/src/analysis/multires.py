"""
Multiresolution estimators
p-Averaging and Energy functions (disjoint and circular blocks), autocorrelation,
and the autocorrelation route to the circular Averaging function.
"""

from typing import List, Optional, Sequence, Union

import numpy as np
import scipy.fft
import structlog
from numpy.typing import ArrayLike

from ..errors import DegenerateInputError, InvalidArgumentError
from ..models.profiles import AutocorrSeries, Definition, MultiresProfile, ProfileKind
from ..models.trace import BinnedTrace, DyadicView
from .binning import as_dyadic

logger = structlog.get_logger(__name__)

DyadicInput = Union[DyadicView, BinnedTrace, ArrayLike]


def _check_p(p: float) -> float:
    if not p > 0:
        raise InvalidArgumentError("averaging exponent p must be positive", p=p)
    return float(p)


def _p_mean(differences: np.ndarray, p: float) -> float:
    """(mean |d|^p)^(1/p); exact for p = 1 and p = 2"""
    magnitudes = np.abs(differences)
    if p == 1.0:
        return float(np.mean(magnitudes))
    if p == 2.0:
        return float(np.sqrt(np.mean(magnitudes * magnitudes)))
    return float(np.mean(magnitudes ** p) ** (1.0 / p))


def _profile(values: List[float], p: float, m: int, definition: Definition, kind: ProfileKind) -> MultiresProfile:
    return MultiresProfile(scale_values=np.asarray(values), p=p, m=m, definition=definition, kind=kind)


def _disjoint_differences(view: DyadicView):
    """Yield (block exponent, differences of adjacent disjoint block sums)"""
    sums = view.values
    for exponent in range(view.m):
        yield exponent, sums[1::2] - sums[0::2]
        sums = sums[0::2] + sums[1::2]


def _circular_differences(view: DyadicView):
    """Yield (block exponent, S_s - S_{s+n}) over all circular origins s, n = 2^exponent"""
    sums = view.values
    for exponent in range(view.m):
        size = 2 ** exponent
        yield exponent, sums - np.roll(sums, -size)
        # windows of 2n from two adjacent windows of n
        sums = sums + np.roll(sums, -size)


def averaging_def1(x: DyadicInput, p: float = 2.0) -> MultiresProfile:
    """
    p-Averaging over disjoint dyadic blocks

    Args:
        x: Series of length 2^m
        p: Exponent, > 0

    Returns:
        Profile labelled j = 1..m; A_j is the p-mean of |differences of adjacent block means|
        for blocks of 2^(j-1) values
    """
    p = _check_p(p)
    view = as_dyadic(x)
    values = [_p_mean(diff, p) / 2 ** exponent for exponent, diff in _disjoint_differences(view)]
    return _profile(values, p, view.m, Definition.DEF1, ProfileKind.AVERAGING)


def energy_def1(x: DyadicInput) -> MultiresProfile:
    """
    Energy over disjoint dyadic blocks

    Args:
        x: Series of length 2^m

    Returns:
        Profile labelled j = 1..m; E_j is the mean squared Haar detail of the
        2^(-e/2)-normalized block sums, e = j - 1
    """
    view = as_dyadic(x)
    values = []
    for exponent, diff in _disjoint_differences(view):
        details = diff * 2.0 ** (-exponent / 2.0) / np.sqrt(2.0)
        values.append(float(np.mean(details * details)))
    return _profile(values, 2.0, view.m, Definition.DEF1, ProfileKind.ENERGY)


def averaging_def2(x: DyadicInput, p: float = 2.0) -> MultiresProfile:
    """
    p-Averaging over all circular block origins

    Args:
        x: Series of length 2^m, indices folded mod 2^m
        p: Exponent, > 0

    Returns:
        Profile labelled j = 0..m-1; A_j is the p-mean over every origin of
        |difference of adjacent block means| for blocks of 2^j values
    """
    p = _check_p(p)
    view = as_dyadic(x)
    values = [_p_mean(diff, p) / 2 ** exponent for exponent, diff in _circular_differences(view)]
    return _profile(values, p, view.m, Definition.DEF2, ProfileKind.AVERAGING)


def energy_def2(x: DyadicInput) -> MultiresProfile:
    """
    Energy over all circular block origins

    Args:
        x: Series of length 2^m

    Returns:
        Profile labelled j = 0..m-1 with E_j = mean of squared normalized details
    """
    view = as_dyadic(x)
    values = []
    for exponent, diff in _circular_differences(view):
        details = diff * 2.0 ** (-exponent / 2.0) / np.sqrt(2.0)
        values.append(float(np.mean(details * details)))
    return _profile(values, 2.0, view.m, Definition.DEF2, ProfileKind.ENERGY)


def averaging(x: DyadicInput, p: float = 2.0, definition: Definition = Definition.DEF2) -> MultiresProfile:
    """Averaging function under the chosen definition"""
    if Definition(definition) == Definition.DEF1:
        return averaging_def1(x, p)
    return averaging_def2(x, p)


def energy(x: DyadicInput, definition: Definition = Definition.DEF2) -> MultiresProfile:
    """Energy function under the chosen definition"""
    if Definition(definition) == Definition.DEF1:
        return energy_def1(x)
    return energy_def2(x)


def autocorrelation(x: ArrayLike, max_lag: int) -> AutocorrSeries:
    """
    Sample autocorrelation with one global mean and variance

    Args:
        x: Series of length ≥ 2
        max_lag: Largest lag, 0 < max_lag < len(x)

    Returns:
        Corr(k) = Σ_{i<n-k} (x_i - x̄)(x_{i+k} - x̄) / Σ (x_i - x̄)^2 for k = 0..max_lag
    """
    values = np.asarray(x, dtype=np.float64)
    n = int(values.shape[0])
    if n < 2:
        raise InvalidArgumentError("autocorrelation needs at least 2 values", length=n)
    if not 0 < max_lag < n:
        raise InvalidArgumentError("max_lag must satisfy 0 < max_lag < length", max_lag=max_lag, length=n)
    if np.ptp(values) == 0:
        raise DegenerateInputError("autocorrelation of a constant series is undefined")

    mean = float(np.mean(values))
    centred = values - mean
    size = scipy.fft.next_fast_len(2 * n, real=True)
    spectrum = scipy.fft.rfft(centred, size)
    covariance = scipy.fft.irfft(spectrum * np.conj(spectrum), size)[: max_lag + 1]
    denominator = float(np.dot(centred, centred))
    corr = np.clip(covariance / denominator, -1.0, 1.0)
    corr[0] = 1.0

    return AutocorrSeries(
        lags=np.arange(max_lag + 1),
        values=corr,
        variance=denominator / n,
        mean=mean,
    )


def circular_autocorrelation(x: ArrayLike) -> AutocorrSeries:
    """
    Autocorrelation with indices folded around the series end

    Returns:
        R(k) = (1/n) Σ_i y_i y_{(i+k) mod n} / σ^2 for k = 0..n-1, y = x - x̄, σ^2 = mean(y^2)
    """
    values = np.asarray(x, dtype=np.float64)
    n = int(values.shape[0])
    if n < 2:
        raise InvalidArgumentError("autocorrelation needs at least 2 values", length=n)
    if np.ptp(values) == 0:
        raise DegenerateInputError("autocorrelation of a constant series is undefined")

    mean = float(np.mean(values))
    centred = values - mean
    spectrum = scipy.fft.rfft(centred)
    covariance = scipy.fft.irfft(spectrum * np.conj(spectrum), n) / n
    variance = float(np.dot(centred, centred)) / n
    corr = np.clip(covariance / variance, -1.0, 1.0)
    corr[0] = 1.0

    return AutocorrSeries(lags=np.arange(n), values=corr, variance=variance, mean=mean, circular=True)


def averaging_via_autocorr(x: DyadicInput) -> MultiresProfile:
    """
    Circular 2-Averaging from the circular autocorrelation

    A_j^2 = (2σ^2 / n) [1 - R(n) + Σ_{i=1}^{n-1} (1 - i/n)(2R(i) - R(n+i) - R(n-i))], n = 2^j,
    evaluated with prefix sums of R(i) and i·R(i).

    Args:
        x: Series of length 2^m with nonzero variance

    Returns:
        Profile labelled j = 0..m-1, equal to averaging_def2(x, 2)
    """
    view = as_dyadic(x)
    acf = circular_autocorrelation(view.values)
    r = np.array(acf.values)
    variance = acf.variance

    lags = np.arange(r.shape[0], dtype=np.float64)
    tail = r.copy()
    tail[0] = 0.0
    c0 = np.cumsum(tail)
    c1 = np.cumsum(lags * tail)

    values = []
    for exponent in range(view.m):
        n = 2 ** exponent
        near = n * c0[n - 1] - c1[n - 1]
        far = 2 * n * (c0[2 * n - 1] - c0[n]) - (c1[2 * n - 1] - c1[n])
        mirrored = c1[n - 1]
        bracket = 1.0 - r[n % r.shape[0]] + (2.0 * near - far - mirrored) / n
        values.append(float(np.sqrt(max(2.0 * variance * bracket / n, 0.0))))

    return _profile(values, 2.0, view.m, Definition.DEF2, ProfileKind.AVERAGING)


def mean_profile(profiles: Sequence[MultiresProfile]) -> MultiresProfile:
    """
    Pointwise mean of profiles sharing definition, kind, p and m

    Args:
        profiles: Profiles of independent realizations

    Returns:
        Profile of the averaged scale values
    """
    if not profiles:
        raise InvalidArgumentError("need at least one profile")
    first = profiles[0]
    for profile in profiles[1:]:
        same = (profile.definition, profile.kind, profile.p, profile.m) == (first.definition, first.kind, first.p, first.m)
        if not same:
            raise InvalidArgumentError("profiles differ in definition, kind, p or m")
    stacked = np.vstack([profile.scale_values for profile in profiles])
    return _profile(list(stacked.mean(axis=0)), first.p, first.m, first.definition, first.kind)


def anchor_log2_profile(profile: MultiresProfile, anchor: Optional[int] = None) -> np.ndarray:
    """
    log2 values shifted so the anchor scale sits at 0

    Args:
        profile: Any profile
        anchor: Scale label to anchor at; defaults to the first scale with a value

    Returns:
        log2 values minus log2 at the anchor, NaN where the value is 0
    """
    logs = profile.log2_values()
    if anchor is None:
        finite = np.flatnonzero(np.isfinite(logs))
        if finite.size == 0:
            return logs
        index = int(finite[0])
    else:
        index = anchor - profile.first_scale
    return logs - logs[index]


def slope_fit(scales: ArrayLike, log_values: ArrayLike) -> tuple:
    """
    Least-squares line through (scale, log value) pairs, NaN entries skipped

    Returns:
        (slope, intercept, r_squared)
    """
    xs = np.asarray(scales, dtype=np.float64)
    ys = np.asarray(log_values, dtype=np.float64)
    keep = np.isfinite(ys)
    xs, ys = xs[keep], ys[keep]
    if xs.shape[0] < 2:
        raise InvalidArgumentError("need at least two finite points for a slope", points=int(xs.shape[0]))
    slope, intercept = np.polyfit(xs, ys, 1)
    residual = ys - (slope * xs + intercept)
    spread = ys - ys.mean()
    total = float(np.dot(spread, spread))
    r_squared = 1.0 - float(np.dot(residual, residual)) / total if total > 0 else 1.0
    return float(slope), float(intercept), r_squared
