"""Interval Detection Algorithm: stage arrays, normalization, evidence and aggregation."""

import math

import numpy as np
import pytest

from src.analysis.ida import aggregate_ida, cutoff_stages, length_class, rescale_columns, run_ida, runs
from src.analysis.level_tools import detect_levels
from src.errors import DegenerateInputError, EmptyInputError, InvalidArgumentError
from src.models.ida import IdaConfig
from src.models.simulation import LevelSpec
from src.models.trace import SessionBitmap
from src.simulation import simulate_session_levels


def periodic(ones: int, zeros: int, periods: int) -> SessionBitmap:
    period = np.concatenate([np.ones(ones), np.zeros(zeros)]).astype(np.uint8)
    return SessionBitmap(bits=np.tile(period, periods))


def filled(bits: np.ndarray, max_class: int, base: float = 2.0) -> np.ndarray:
    """Bitmap with every 0-run of class ≤ max_class set to 1"""
    values, lengths = runs(bits)
    values = values.copy()
    values[(values == 0) & (length_class(lengths, base) <= max_class)] = 1
    return np.repeat(values, lengths)


def test_length_class_at_exact_powers():
    assert length_class([1, 2, 3, 4, 7, 8, 1024], 2.0).tolist() == [0, 1, 1, 2, 2, 3, 10]
    assert length_class([4, 16], math.sqrt(2)).tolist() == [4, 8]


def test_runs():
    values, lengths = runs(np.array([1, 1, 0, 0, 0, 1], dtype=np.uint8))
    assert values.tolist() == [1, 0, 1]
    assert lengths.tolist() == [2, 3, 1]


def test_periodic_session(periodic_session):
    result = run_ida(periodic_session)
    assert result.session_length == 400
    assert result.classes == 9
    assert result.stage_count == 10

    assert result.gap_histogram.tolist() == [0, 0, 80, 0, 0, 0, 0, 0, 0]
    assert result.stage_array[4, :3].tolist() == [320, 320, 320]
    assert np.all(result.stage_array[8, 3:] == 400)
    assert result.stage_array.sum() == pytest.approx(3 * 320 + 7 * 400)
    assert result.fill_weights.tolist() == [320, 320] + [400] * 8

    assert result.cutoff_stages[4] == 3
    assert result.stage_weights[4, 0] == pytest.approx(0.8)
    assert result.gap_weights[2] == pytest.approx(80 / 320)

    assert result.artifact_class == 8
    assert result.artifact_stages == list(range(3, 10))
    assert result.v0.tolist() == [0, 0, 1, 0, 0, 0, 0, 0, 0]
    assert int(np.argmax(result.v1)) == 8
    assert result.v1_without_artifact().tolist() == [0, 0, 0, 0, 1, 0, 0, 0, 0]


def test_gap_histogram_conserves_zeros(rng):
    bits = (rng.random(5000) < 0.7).astype(np.uint8)
    result = run_ida(SessionBitmap(bits=bits))
    assert result.gap_histogram.sum() == pytest.approx(len(bits) - bits.sum())
    assert result.stage_array[:, 0].sum() == pytest.approx(bits.sum())


def test_fill_weights_grow_to_session_length():
    levels = [LevelSpec(on_mean=64, off_mean=16), LevelSpec(on_mean=8, off_mean=2)]
    bits = simulate_session_levels(levels, None, 4096, 3).bits
    result = run_ida(SessionBitmap(bits=bits))
    assert np.all(np.diff(result.fill_weights) >= 0)
    assert result.fill_weights[-1] == 4096
    assert result.fill_weights[0] >= bits.sum()
    assert np.all(result.im >= 0)
    assert np.all(result.im <= 1)


def test_stage_columns_after_prefilling(rng):
    bits = (rng.random(2048) < 0.6).astype(np.uint8)
    bits[::64] = 0
    bits[1::64] = 0
    bits[2::64] = 0
    original = run_ida(SessionBitmap(bits=bits))
    prefilled = run_ida(SessionBitmap(bits=filled(bits, 1)))
    assert np.array_equal(prefilled.stage_array[:, 0], original.stage_array[:, 2])
    assert np.array_equal(prefilled.stage_array[:, 1], original.stage_array[:, 2])
    assert np.array_equal(prefilled.stage_array[:, 2:], original.stage_array[:, 2:])


def test_doubling_lengths_shifts_classes():
    small = run_ida(periodic(16, 4, 20))
    large = run_ida(periodic(32, 8, 20))
    assert int(np.argmax(small.v0)) == 2
    assert int(np.argmax(large.v0)) == 3
    assert int(np.argmax(small.v1_without_artifact())) == 4
    assert int(np.argmax(large.v1_without_artifact())) == 5


def test_square_root_base(periodic_session):
    result = run_ida(periodic_session, IdaConfig(base=math.sqrt(2)))
    assert result.classes == 18
    assert int(np.argmax(result.v0)) == 4
    assert int(np.argmax(result.v1_without_artifact())) == 8


def test_session_normalization(periodic_session):
    result = run_ida(periodic_session, IdaConfig(gap_normalization="session"))
    assert result.gap_weights[2] == pytest.approx(80 / 400)


def test_display_matrix_columns(periodic_session):
    result = run_ida(periodic_session, IdaConfig(zero_column=True))
    assert result.im.shape == (9, 12)
    assert np.all(result.im[:, 10] == 0)
    assert result.im[2, 11] == 1.0


def test_degenerate_and_empty_sessions():
    with pytest.raises(DegenerateInputError):
        run_ida(SessionBitmap(bits=np.ones(64)))
    with pytest.raises(DegenerateInputError):
        run_ida(SessionBitmap(bits=np.zeros(64)))
    with pytest.raises(EmptyInputError):
        run_ida(SessionBitmap(bits=[]))


def test_evidence_vectors_peak_at_one(rng):
    bits = (rng.random(4096) < 0.8).astype(np.uint8)
    result = run_ida(SessionBitmap(bits=bits))
    assert result.v1.max() == pytest.approx(1.0)
    assert result.v0.max() == pytest.approx(1.0)
    assert result.v1_without_artifact().max() == pytest.approx(1.0)


def test_cutoff_stages():
    stage_array = np.array(
        [
            [1.0, 2.0, 3.0],
            [5.0, 5.0, 0.1],
            [0.0, 0.0, 0.0],
            [4.0, 0.2, 3.0],
        ]
    )
    assert cutoff_stages(stage_array, 0.1).tolist() == [2, 2, 0, 1]


def test_rescale_columns():
    matrix = np.array(
        [
            [6.0, 4.0, 3.2, 2.0],
            [1.0, 2.0, 1.0, 0.0],
            [0.0, 1.0, 0.5, 0.0],
        ]
    )
    scaled = rescale_columns(matrix, 3.0, 0.3, 1e-12)
    assert scaled[:, 0].tolist() == [1.0, 1.0, 0.0]
    assert scaled[:, 1].tolist() == [1.0, 1.0, 0.5]
    assert scaled[:, 2].tolist() == pytest.approx([3.2, 1.0, 0.5])
    assert scaled[:, 3].tolist() == [1.0, 0.0, 0.0]


def test_config_thresholds():
    with pytest.raises(ValueError):
        IdaConfig(c1=0.3, c2=3.0)
    with pytest.raises(ValueError):
        IdaConfig(base=1.0)


def test_aggregate_of_one_is_identity(periodic_session):
    result = run_ida(periodic_session)
    aggregate = aggregate_ida([result])
    assert np.allclose(aggregate.v1, result.v1)
    assert np.allclose(aggregate.v0, result.v0)
    assert aggregate.sessions == 1
    assert aggregate.artifact_stages == result.artifact_stages


def test_aggregate_of_identical_sessions(rng):
    bits = (rng.random(2048) < 0.75).astype(np.uint8)
    result = run_ida(SessionBitmap(bits=bits))
    aggregate = aggregate_ida([result] * 4)
    assert aggregate.sessions == 4
    assert np.allclose(aggregate.stage_weights, 4 * result.stage_weights)
    assert np.allclose(aggregate.v1, result.v1)
    assert np.allclose(aggregate.v0, result.v0)


def test_aggregate_pads_shorter_sessions():
    short = run_ida(periodic(16, 4, 20))
    long = run_ida(periodic(16, 4, 40))
    aggregate = aggregate_ida([short, long])
    assert aggregate.classes == long.classes
    assert aggregate.gap_histogram[2] == pytest.approx(80 + 160)
    assert aggregate.artifact_stages == long.artifact_stages


def test_aggregate_rejects_mixed_bases(periodic_session):
    binary = run_ida(periodic_session)
    root = run_ida(periodic_session, IdaConfig(base=math.sqrt(2)))
    with pytest.raises(InvalidArgumentError):
        aggregate_ida([binary, root])
    with pytest.raises(EmptyInputError):
        aggregate_ida([])


@pytest.mark.slow
def test_recovers_three_levels():
    levels = [
        LevelSpec(on_mean=2 ** 16, off_mean=2 ** 12, family="uniform", spread=0.3),
        LevelSpec(on_mean=2 ** 11, off_mean=2 ** 7, family="uniform", spread=0.3),
        LevelSpec(on_mean=2 ** 6, off_mean=2 ** 2, family="uniform", spread=0.3),
    ]
    for seed in range(8):
        result = run_ida(simulate_session_levels(levels, None, 2 ** 20, seed))
        # the top class only holds the whole-session run
        one_levels = detect_levels(result.v1[: result.artifact_class])
        zero_levels = detect_levels(result.v0)
        for target in (6, 11, 16):
            assert any(abs(level - target) <= 1 for level in one_levels), (seed, target, one_levels)
        for target in (2, 7, 12):
            assert any(abs(level - target) <= 1 for level in zero_levels), (seed, target, zero_levels)
