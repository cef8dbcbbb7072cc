"""
Analysis
Binning, multiresolution estimators, Gaussianity of marginals, interval detection and level tools.
"""

from .binning import (
    bin_trace,
    to_bitmap,
    bitmap_to_trace,
    truncate_to_power_of_two,
    as_dyadic,
    block_sums,
)
from .multires import (
    averaging_def1,
    energy_def1,
    averaging_def2,
    energy_def2,
    averaging,
    energy,
    autocorrelation,
    circular_autocorrelation,
    averaging_via_autocorr,
    mean_profile,
    anchor_log2_profile,
    slope_fit,
)
from .gaussianity import (
    empirical_cdf,
    kolmogorov_to_normal,
    windowed_kolmogorov,
    distance_traffic_correlation,
    pearson,
    oscillation_amplitude,
    classify_distance,
    mean_distance,
)
from .ida import run_ida, aggregate_ida, runs, length_class
from .level_tools import (
    local_maxima,
    detect_levels,
    tool1_level_detector,
    tool2_flat_regions,
    tool3_gaussian_deviation,
    tool4_burstiness,
    combine_burstiness,
    burstiness_report,
)

__all__ = [
    "bin_trace",
    "to_bitmap",
    "bitmap_to_trace",
    "truncate_to_power_of_two",
    "as_dyadic",
    "block_sums",
    "averaging_def1",
    "energy_def1",
    "averaging_def2",
    "energy_def2",
    "averaging",
    "energy",
    "autocorrelation",
    "circular_autocorrelation",
    "averaging_via_autocorr",
    "mean_profile",
    "anchor_log2_profile",
    "slope_fit",
    "empirical_cdf",
    "kolmogorov_to_normal",
    "windowed_kolmogorov",
    "distance_traffic_correlation",
    "pearson",
    "oscillation_amplitude",
    "classify_distance",
    "mean_distance",
    "run_ida",
    "aggregate_ida",
    "runs",
    "length_class",
    "local_maxima",
    "detect_levels",
    "tool1_level_detector",
    "tool2_flat_regions",
    "tool3_gaussian_deviation",
    "tool4_burstiness",
    "combine_burstiness",
    "burstiness_report",
]
