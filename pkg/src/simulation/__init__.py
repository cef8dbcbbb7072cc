"""
Simulation
Seeded traffic generators for the ON/OFF, packetized, Slow Start and multiscale models.
"""

from .rng import SeededStreams
from .distributions import sample_heavy, sample_light, sample_intervals
from .slow_start import (
    slow_start_schedule,
    slow_start_counts,
    slow_start_weights,
    emission_weights,
    assign_slow_start_weights,
    phi,
)
from .sessions import rtt_spike_vector, level_vector, session_vectors, simulate_session_levels
from .generators import (
    simulate,
    simulate_model_a,
    simulate_model_b,
    simulate_model_c,
    simulate_model_d,
    simulate_combined,
    simulate_baseline,
)
from .presets import BASELINE_PRESETS, parse_level_label, preset_overrides

__all__ = [
    "SeededStreams",
    "sample_heavy",
    "sample_light",
    "sample_intervals",
    "slow_start_schedule",
    "slow_start_counts",
    "slow_start_weights",
    "emission_weights",
    "assign_slow_start_weights",
    "phi",
    "rtt_spike_vector",
    "level_vector",
    "session_vectors",
    "simulate_session_levels",
    "simulate",
    "simulate_model_a",
    "simulate_model_b",
    "simulate_model_c",
    "simulate_model_d",
    "simulate_combined",
    "simulate_baseline",
    "BASELINE_PRESETS",
    "parse_level_label",
    "preset_overrides",
]
