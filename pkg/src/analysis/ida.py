"""
Interval Detection Algorithm
Run-length histograms of a session under progressive gap filling, normalized into
1-interval and 0-interval evidence per length class.
"""

import math
from typing import List, Sequence, Tuple

import numpy as np
import structlog

from ..errors import DegenerateInputError, EmptyInputError, InvalidArgumentError
from ..models.ida import IdaConfig, IdaResult
from ..models.trace import SessionBitmap

logger = structlog.get_logger(__name__)

CLASS_TOLERANCE = 1e-9


def length_class(lengths, base: float) -> np.ndarray:
    """floor(log_base L), robust to rounding at exact powers of the base"""
    lengths = np.asarray(lengths, dtype=np.float64)
    return np.floor(np.log(lengths) / math.log(base) + CLASS_TOLERANCE).astype(np.int64)


def runs(bits: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Maximal runs of a 0/1 vector

    Returns:
        (value of every run, length of every run)
    """
    if bits.shape[0] == 0:
        return np.zeros(0, dtype=np.uint8), np.zeros(0, dtype=np.int64)
    change = np.flatnonzero(np.diff(bits.astype(np.int8))) + 1
    starts = np.concatenate([[0], change])
    ends = np.concatenate([change, [bits.shape[0]]])
    return bits[starts], ends - starts


def _class_mass(lengths: np.ndarray, base: float, classes: int) -> np.ndarray:
    if lengths.size == 0:
        return np.zeros(classes)
    return np.bincount(length_class(lengths, base), weights=lengths.astype(np.float64), minlength=classes)[:classes]


def _fill_stages(bits: np.ndarray, base: float, classes: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Histogram 1-runs, then fill gaps of class ≤ i, for every stage i

    Returns:
        (stage array classes x (classes + 1), ones count after every stage)
    """
    stage_count = classes + 1
    stage_array = np.zeros((classes, stage_count))
    fill_weights = np.zeros(stage_count)
    values, lengths = runs(bits)

    for stage in range(stage_count):
        ones = values == 1
        stage_array[:, stage] = _class_mass(lengths[ones], base, classes)

        fill = (~ones) & (length_class(lengths, base) <= stage)
        values = np.where(fill, 1, values).astype(np.uint8)
        # merge neighbours that now carry the same value
        expanded = np.repeat(values, lengths)
        values, lengths = runs(expanded)
        fill_weights[stage] = float(expanded.sum())

    return stage_array, fill_weights


def cutoff_stages(stage_array: np.ndarray, gamma: float) -> np.ndarray:
    """
    Per class, the highest stage I where the row falls below gamma times its maximum
    while the previous stage is still above it; the row maximum's stage if none
    """
    classes, stage_count = stage_array.shape
    cutoffs = np.zeros(classes, dtype=np.int64)
    for row in range(classes):
        values = stage_array[row]
        peak = values.max()
        cutoffs[row] = int(np.argmax(values))
        if peak <= 0:
            continue
        for stage in range(stage_count - 1, 0, -1):
            if values[stage] < gamma * peak and values[stage - 1] >= gamma * peak:
                cutoffs[row] = stage
                break
    return cutoffs


def rescale_columns(matrix: np.ndarray, c1: float, c2: float, epsilon: float) -> np.ndarray:
    """
    Divide every column by its second largest entry; clamp at 1 unless the
    top two entries satisfy m1 > c1 m2 and m2 > c2 m1
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    out = np.zeros_like(matrix)
    for column in range(matrix.shape[1]):
        values = matrix[:, column]
        ordered = np.sort(values)[::-1]
        m1 = ordered[0] if ordered.size else 0.0
        m2 = ordered[1] if ordered.size > 1 else 0.0
        scaled = values / max(m2, epsilon)
        if not (m1 > c1 * m2 and m2 > c2 * m1):
            scaled = np.minimum(scaled, 1.0)
        out[:, column] = scaled
    return out


def _unit_max(vector: np.ndarray) -> np.ndarray:
    peak = vector.max() if vector.size else 0.0
    return vector / peak if peak > 0 else vector


def _display_matrix(stages: np.ndarray, gaps: np.ndarray, zero_column: bool) -> np.ndarray:
    """Stage columns, optional blank column, gap column; every column scaled to max 1"""
    columns = [stages]
    if zero_column:
        columns.append(np.zeros((stages.shape[0], 1)))
    columns.append(gaps.reshape(-1, 1))
    im = np.hstack(columns)
    peaks = im.max(axis=0)
    peaks[peaks <= 0] = 1.0
    return im / peaks


def _evidence(
    stage_weights: np.ndarray,
    gap_weights: np.ndarray,
    config: IdaConfig,
) -> dict:
    """Representation step: rescaled stages, display matrix, v1 and v0"""
    stages = rescale_columns(stage_weights, config.c1, config.c2, config.epsilon)
    if config.normalize_gaps:
        gaps = rescale_columns(gap_weights.reshape(-1, 1), config.c1, config.c2, config.epsilon)[:, 0]
    else:
        gaps = gap_weights
    return {
        "stages": stages,
        "im": _display_matrix(stages, gaps, config.zero_column),
        "v1": _unit_max(stages.sum(axis=1)),
        "v0": _unit_max(np.asarray(gaps, dtype=np.float64)),
    }


def _gap_weights(
    gap_histogram: np.ndarray,
    fill_weights: np.ndarray,
    cutoffs: np.ndarray,
    session_length: int,
    config: IdaConfig,
) -> np.ndarray:
    if config.gap_normalization == "session":
        return gap_histogram / float(session_length)
    return gap_histogram / np.maximum(fill_weights[cutoffs], config.epsilon)


def run_ida(session: SessionBitmap, config: IdaConfig = IdaConfig()) -> IdaResult:
    """
    Interval Detection Algorithm on one session

    Args:
        session: 0/1 session bitmap with at least one 1 and one 0
        config: Base, thresholds and normalization switches

    Returns:
        IdaResult with classes 0..K (K = floor(log_base N)) and stages 0..K+1
    """
    bits = np.asarray(session.bits, dtype=np.uint8)
    length = int(bits.shape[0])
    if length == 0:
        raise EmptyInputError("session bitmap is empty")
    ones = int(bits.sum())
    if ones == 0 or ones == length:
        raise DegenerateInputError("session bitmap must contain both 0s and 1s", ones=ones, length=length)

    classes = int(length_class(length, config.base)) + 1

    # gap histogram
    values, lengths = runs(bits)
    gap_histogram = _class_mass(lengths[values == 0], config.base, classes)

    # progressive filling
    stage_array, fill_weights = _fill_stages(bits, config.base, classes)

    # per-row normalization
    cutoffs = cutoff_stages(stage_array, config.gamma)
    stage_weights = stage_array / np.maximum(fill_weights[cutoffs], config.epsilon).reshape(-1, 1)
    gap_weights = _gap_weights(gap_histogram, fill_weights, cutoffs, length, config)

    # stages whose histogram already sees the whole session as one run
    artifact_stages = [stage for stage in range(1, classes + 1) if fill_weights[stage - 1] == length]

    logger.debug(
        "IDA completed",
        length=length,
        ones=ones,
        classes=classes,
        artifact_stages=artifact_stages,
    )
    return IdaResult(
        config=config,
        session_length=length,
        gap_histogram=gap_histogram,
        stage_array=stage_array,
        fill_weights=fill_weights,
        cutoff_stages=cutoffs,
        gap_weights=gap_weights,
        stage_weights=stage_weights,
        artifact_class=classes - 1,
        artifact_stages=artifact_stages,
        **_evidence(stage_weights, gap_weights, config),
    )


def _pad(matrix: np.ndarray, classes: int) -> np.ndarray:
    """Zero-pad a vector to the given length, or a stage matrix to classes x (classes + 1)"""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim == 1:
        out = np.zeros(classes)
        out[: matrix.shape[0]] = matrix
        return out
    out = np.zeros((classes, classes + 1))
    out[: matrix.shape[0], : matrix.shape[1]] = matrix
    return out


def aggregate_ida(results: Sequence[IdaResult]) -> IdaResult:
    """
    Superpose the results of several sessions

    Histograms and the normalized stage/gap weights are summed (shorter sessions
    padded with zeros), then the representation step is re-applied.

    Args:
        results: IDA results sharing one base

    Returns:
        IdaResult of the superposition, configured as the first result
    """
    if not results:
        raise EmptyInputError("nothing to aggregate")
    config = results[0].config
    bases = {result.config.base for result in results}
    if len(bases) > 1:
        raise InvalidArgumentError("IDA results use different bases", bases=sorted(bases))

    classes = max(result.classes for result in results)
    gap_histogram = sum(_pad(result.gap_histogram, classes) for result in results)
    stage_array = sum(_pad(result.stage_array, classes) for result in results)
    fill_weights = sum(_pad(result.fill_weights, classes + 1) for result in results)
    gap_weights = sum(_pad(result.gap_weights, classes) for result in results)
    stage_weights = sum(_pad(result.stage_weights, classes) for result in results)

    artifact_stages: List[int] = sorted(
        {stage for result in results if result.classes == classes for stage in result.artifact_stages}
    )

    logger.info("IDA results aggregated", sessions=len(results), classes=classes)
    return IdaResult(
        config=config,
        session_length=max(result.session_length for result in results),
        sessions=sum(result.sessions for result in results),
        gap_histogram=gap_histogram,
        stage_array=stage_array,
        fill_weights=fill_weights,
        cutoff_stages=cutoff_stages(stage_array, config.gamma),
        gap_weights=gap_weights,
        stage_weights=stage_weights,
        artifact_class=classes - 1,
        artifact_stages=artifact_stages,
        **_evidence(stage_weights, gap_weights, config),
    )
