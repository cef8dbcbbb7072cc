"""Slope-change level detector, flat regions and the Gaussian / burstiness indices."""

import numpy as np
import pytest

from src.analysis import gaussianity, level_tools, multires
from src.errors import DegenerateInputError, InsufficientDataError, InvalidArgumentError
from src.models.profiles import Definition, MultiresProfile, ProfileKind
from src.models.simulation import HeavyTailSpec, LevelSpec, SimConfig
from src.simulation import parse_level_label, simulate


def profile_from_log2(log2_values) -> MultiresProfile:
    logs = np.asarray(log2_values, dtype=np.float64)
    return MultiresProfile(
        scale_values=2.0 ** logs,
        p=2.0,
        m=logs.shape[0],
        definition=Definition.DEF2,
        kind=ProfileKind.AVERAGING,
    )


BUMP = [0, 1, 2, 3, 2, 1, 0, -1]


def test_local_maxima():
    assert level_tools.local_maxima([0, 1, 0, 2, 2, 1, 3]) == [1, 3, 6]
    assert level_tools.local_maxima([np.nan, 2, 1, np.nan, 0.5, 1]) == [1, 5]
    assert level_tools.local_maxima([0.0, 0.0]) == []
    assert level_tools.detect_levels([0.2, 1.0, 0.5, 0.7]) == [1, 3]


def test_tool1_on_a_straight_line_finds_nothing():
    series = level_tools.tool1_level_detector(profile_from_log2(-np.arange(8)))
    assert np.allclose(series.slopes, -1.0)
    assert np.all(series.changes == 0)
    assert series.levels == []


def test_tool1_locates_a_bump():
    series = level_tools.tool1_level_detector(profile_from_log2(BUMP))
    assert series.slope_scales.tolist() == list(range(1, 8))
    assert series.change_scales.tolist() == list(range(1, 7))
    assert series.changes[2] == pytest.approx(2.0)
    assert series.levels == [3]
    assert series.ranked_levels == [3]


def test_tool1_ignores_profile_scaling(white_noise):
    profile = multires.averaging_def2(white_noise)
    scaled = multires.averaging_def2(5.0 * white_noise)
    first = level_tools.tool1_level_detector(profile)
    second = level_tools.tool1_level_detector(scaled)
    assert np.allclose(first.changes, second.changes)
    assert first.levels == second.levels


def test_tool1_epsilon_floor():
    flat = profile_from_log2([0, 1, 1, 0])
    series = level_tools.tool1_level_detector(flat, epsilon=0.5)
    assert series.changes.tolist() == [2.0, 2.0]
    with pytest.raises(InvalidArgumentError):
        level_tools.tool1_level_detector(flat, epsilon=0.0)


def test_tool1_needs_four_usable_scales():
    with pytest.raises(InsufficientDataError):
        level_tools.tool1_level_detector(profile_from_log2([0, 1, 2]))
    sparse = MultiresProfile(
        scale_values=[0.0, 0.0, 1.0, 2.0, 4.0],
        p=2.0,
        m=5,
        definition=Definition.DEF2,
        kind=ProfileKind.AVERAGING,
    )
    with pytest.raises(InsufficientDataError):
        level_tools.tool1_level_detector(sparse)


def test_tool2_flags_rising_scales():
    regions = level_tools.tool2_flat_regions(profile_from_log2(BUMP))
    assert regions.flags == [True, True, True, False, False, False, False]
    assert regions.regions == [(1, 3)]
    assert regions.covers(2)
    assert not regions.covers(5)


def test_tool2_threshold():
    gentle = profile_from_log2([0.0, -0.05, -0.1, -0.15])
    assert level_tools.tool2_flat_regions(gentle).regions == [(1, 3)]
    assert level_tools.tool2_flat_regions(gentle, threshold=0.0).regions == []


def test_tool2_white_noise_is_never_flat():
    profiles = [
        multires.averaging_def2(np.random.default_rng(seed).exponential(1.0, 2 ** 12)) for seed in range(16)
    ]
    regions = level_tools.tool2_flat_regions(multires.mean_profile(profiles))
    assert not any(regions.flags[:8])


def test_tool3_single_scale_is_the_kolmogorov_distance(rng):
    x = rng.exponential(1.0, 2 ** 11)
    report = level_tools.tool3_gaussian_deviation(x, 1)
    assert report.D == pytest.approx(gaussianity.kolmogorov_to_normal(x))
    assert report.per_scale_D.shape == (1,)


def test_tool3_separates_gaussian_and_heavy_tails(rng):
    gaussian = level_tools.tool3_gaussian_deviation(rng.normal(0, 1, 2 ** 14), 3)
    heavy = level_tools.tool3_gaussian_deviation(rng.pareto(0.8, 2 ** 14) + 1.0, 3)
    assert gaussian.D < 0.05
    assert heavy.D > 0.2


def test_tool3_scale_count_limits(rng):
    x = rng.normal(0, 1, 2 ** 10)
    with pytest.raises(InvalidArgumentError):
        level_tools.tool3_gaussian_deviation(x, 1)
    relaxed = level_tools.tool3_gaussian_deviation(x, 2, strict=False)
    assert relaxed.k == 2
    with pytest.raises(InvalidArgumentError):
        level_tools.tool3_gaussian_deviation(x, 0, strict=False)
    with pytest.raises(InvalidArgumentError):
        level_tools.tool3_gaussian_deviation(x, 10, strict=False)


def test_tool3_constant_series_is_degenerate():
    with pytest.raises(DegenerateInputError):
        level_tools.tool3_gaussian_deviation(np.ones(2 ** 11), 1)


def test_tool4_index_is_a_correlation(rng):
    report = level_tools.tool4_burstiness(rng.exponential(1.0, 2 ** 14), 3, s=6, strict=False)
    assert -1.0 <= report.O <= 1.0
    assert report.s == 6
    assert np.all(np.isfinite(report.per_scale_C))
    assert np.all(report.per_scale_Dbar > 0)


def test_tool4_quiet_spiky_windows_give_negative_index(rng):
    window = 64
    rows = []
    for index in range(64):
        if index % 2 == 0:
            rows.append(rng.normal(10.0, 1.0, window))
        else:
            quiet = np.zeros(window)
            quiet[[5, 40]] = 1.0
            rows.append(quiet)
    report = level_tools.tool4_burstiness(np.concatenate(rows), 1, s=6, strict=False)
    assert report.O < -0.5


def test_tool4_excludes_scales_with_few_windows(rng):
    x = rng.normal(0, 1, 2 ** 11)
    report = level_tools.tool4_burstiness(x, 2, s=9, strict=False)
    assert report.excluded_scales == [1]
    assert np.isnan(report.per_scale_C[1])
    with pytest.raises(InsufficientDataError):
        level_tools.tool4_burstiness(rng.normal(0, 1, 2 ** 10), 1, s=9, strict=False)


def test_tool4_parameter_limits(rng):
    x = rng.normal(0, 1, 2 ** 12)
    with pytest.raises(InvalidArgumentError):
        level_tools.tool4_burstiness(x, 1, s=6)
    with pytest.raises(InvalidArgumentError):
        level_tools.tool4_burstiness(x, 1, s=9)
    with pytest.raises(InvalidArgumentError):
        level_tools.tool4_burstiness(x, 1, s=0, strict=False)


def test_combine_burstiness():
    assert level_tools.combine_burstiness([0.5, -1.0, np.nan], [0.2, 0.2, 0.3]) == pytest.approx(-0.25)
    with pytest.raises(DegenerateInputError):
        level_tools.combine_burstiness([0.5], [0.0])


def test_burstiness_report_merges_both_tools(rng):
    report = level_tools.burstiness_report(rng.exponential(1.0, 2 ** 12), 2, s=6, strict=False)
    assert report.D is not None
    assert report.O is not None
    assert report.k == 2
    assert report.s == 6


def _mean_averaging(config: SimConfig, seeds: int) -> MultiresProfile:
    profiles = [
        multires.averaging_def2(simulate(config.model_copy(update={"seed": seed}))) for seed in range(seeds)
    ]
    return multires.mean_profile(profiles)


@pytest.mark.slow
def test_single_level_bump():
    m = 20
    config = SimConfig(
        model="model_d",
        users=16,
        bins_log2=m,
        levels=[LevelSpec(on_mean=2 ** 12, off_mean=2 ** 12)],
        rtt=None,
    )
    profile = _mean_averaging(config, 8)

    peaks = level_tools.local_maxima(profile.log2_values())
    assert any(abs(peak - 12) <= 1 for peak in peaks), peaks

    series = level_tools.tool1_level_detector(profile)
    reliable = [level for level in series.ranked_levels if level <= m - 4]
    assert abs(reliable[0] - 12) <= 1, series.ranked_levels


@pytest.mark.slow
def test_three_levels_with_rtt():
    levels = (7, 12, 17)
    config = SimConfig(model="model_d", users=16, bins_log2=22, levels=parse_level_label("7/12/17"))
    profile = _mean_averaging(config, 16)

    logs = profile.log2_values()
    slope, _, _ = multires.slope_fit(profile.scales[:3], logs[:3])
    assert slope <= -0.3

    regions = level_tools.tool2_flat_regions(profile)
    assert regions.covers(12), regions.regions
    assert regions.covers(17), regions.regions

    # Sc also peaks on the plateaus between levels; ranks are not compared
    series = level_tools.tool1_level_detector(profile)
    for level in levels:
        assert any(abs(found - level) <= 1 for found in series.levels), (level, series.ranked_levels)


def _model_c_traces(users: int, max_weight: int, p: float, seeds: int = 16):
    config = SimConfig(
        model="model_c", users=users, bins_log2=17, slow_start_max=max_weight, load=HeavyTailSpec(p=p)
    )
    return [simulate(config.model_copy(update={"seed": seed})) for seed in range(seeds)]


def _mean_window_distance(traces) -> float:
    return float(np.mean([gaussianity.mean_distance(gaussianity.windowed_kolmogorov(trace, 512)) for trace in traces]))


@pytest.mark.slow
def test_model_c_many_small_senders_look_gaussian():
    traces = _model_c_traces(users=500, max_weight=1, p=1.8)
    assert _mean_window_distance(traces) < 0.1
    burstiness = [level_tools.tool4_burstiness(trace.values, 1).O for trace in traces]
    assert np.mean(burstiness) > -0.1, burstiness


@pytest.mark.slow
def test_model_c_few_senders_have_negative_burstiness():
    traces = _model_c_traces(users=20, max_weight=16, p=1.2)
    burstiness = [level_tools.tool4_burstiness(trace.values, 1).O for trace in traces]
    assert np.mean(burstiness) < 0, burstiness
    correlations = [
        gaussianity.distance_traffic_correlation(gaussianity.windowed_kolmogorov(trace, 512)) for trace in traces
    ]
    assert np.mean(correlations) < 0, correlations


@pytest.mark.slow
def test_tool3_orders_model_c_by_max_weight():
    means = []
    for max_weight in (1, 16, 256):
        traces = _model_c_traces(users=20, max_weight=max_weight, p=1.2)
        means.append(np.mean([level_tools.tool3_gaussian_deviation(trace.values, 7).D for trace in traces]))
        if max_weight == 256:
            assert _mean_window_distance(traces) > 0.2
    assert means[0] < means[1] < means[2], means
