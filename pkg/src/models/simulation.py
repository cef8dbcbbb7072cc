"""
Simulation models
Distribution specs, levels and the full simulator configuration.
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class ModelKind(str, Enum):
    """Simulator selector"""

    MODEL_A = "model_a"
    MODEL_B = "model_b"
    MODEL_C = "model_c"
    MODEL_D = "model_d"
    COMBINED = "combined"
    COMBINED_RTT_LEVELS = "combined_rtt_levels"
    RH = "rh"
    RH_HT = "rh_ht"
    ARRRH = "arrrh"
    EXP_IID = "exp_iid"
    HT_IID = "ht_iid"


# Labels used in the literature for the same simulators
MODEL_ALIASES = {
    "0-1": ModelKind.MODEL_A,
    "arr": ModelKind.MODEL_B,
    "slow-start": ModelKind.MODEL_C,
    "levels": ModelKind.MODEL_D,
}


class LightTailFamily(str, Enum):
    EXPONENTIAL = "exponential"
    UNIFORM = "uniform"
    GAUSSIAN = "gaussian"
    CONSTANT = "constant"


class HeavyTailSpec(BaseModel):
    """
    Pareto law with P(Y > t) = (scale / t)^p for t ≥ scale
    """

    model_config = ConfigDict(frozen=True)

    p: float = Field(1.5, gt=1, lt=2, description="Tail exponent")
    scale: float = Field(1.0, gt=0, description="Lower end of the support")
    integer_valued: bool = Field(False, description="Round samples up to integers")

    @property
    def mean(self) -> float:
        return self.scale * self.p / (self.p - 1)


class LightTailSpec(BaseModel):
    """
    Finite-variance law of OFF intervals, RTTs, heights and level intervals
    - uniform: spread is the relative half-width (0.3 means mean ± 30%)
    - gaussian: spread is variance / mean, samples truncated at 0
    - exponential, constant: spread unused
    """

    model_config = ConfigDict(frozen=True)

    family: LightTailFamily = LightTailFamily.EXPONENTIAL
    mean: float = Field(1.0, gt=0)
    spread: float = Field(0.0, ge=0)

    @model_validator(mode="after")
    def validate_spread(self):
        if self.family == LightTailFamily.UNIFORM and self.spread > 1:
            raise ValueError("uniform spread is a relative half-width and must be ≤ 1")
        return self


class LevelSpec(BaseModel):
    """
    One level of a multiscale session: mean 1-interval and 0-interval lengths in bins
    - sharp levels draw both intervals uniformly within ±10% of the mean
    """

    model_config = ConfigDict(frozen=True)

    on_mean: float = Field(..., ge=1, description="Mean 1-interval length (bins)")
    off_mean: float = Field(..., ge=1, description="Mean 0-interval length (bins)")
    family: LightTailFamily = LightTailFamily.EXPONENTIAL
    spread: float = Field(0.0, ge=0)
    sharp: bool = False

    @property
    def on_dist(self) -> LightTailSpec:
        return self._dist(self.on_mean)

    @property
    def off_dist(self) -> LightTailSpec:
        return self._dist(self.off_mean)

    def _dist(self, mean: float) -> LightTailSpec:
        if self.sharp:
            return LightTailSpec(family=LightTailFamily.UNIFORM, mean=mean, spread=0.1)
        return LightTailSpec(family=self.family, mean=mean, spread=self.spread)


class SimConfig(BaseModel):
    """
    Full simulator configuration; every field has a default so presets only name differences
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    model: ModelKind = ModelKind.MODEL_A
    users: int = Field(1, ge=1, description="Number of independent users n")
    bins_log2: int = Field(14, ge=1, le=30, description="Trace length is 2^bins_log2 bins")
    bin_width: float = Field(0.001, gt=0, description="Nominal bin width (s), display only")
    seed: int = Field(0, ge=0, lt=2 ** 64)

    load: HeavyTailSpec = Field(default_factory=HeavyTailSpec, description="ON lengths / loads / budgets")
    on: Optional[LightTailSpec] = Field(None, description="Light-tailed ON lengths replacing load (model A)")
    off: LightTailSpec = Field(default_factory=lambda: LightTailSpec(mean=10.0))
    rtt: Optional[LightTailSpec] = Field(default_factory=lambda: LightTailSpec(mean=2.0))
    heights: LightTailSpec = Field(default_factory=LightTailSpec, description="RH / ARRRH / EXP_IID values")

    slow_start_max: int = Field(1, ge=1, description="Max emission weight M")
    packet_scale: float = Field(1.0, gt=0, description="Packet-size factor λ")

    levels: List[LevelSpec] = Field(default_factory=list, description="Coarse to fine")
    rtt_level_count: int = Field(0, ge=0, description="Finest levels whose gaps continue a Slow Start session")

    spike_interarrival: LightTailSpec = Field(default_factory=lambda: LightTailSpec(mean=100.0))
    spike_heights: LightTailSpec = Field(default_factory=lambda: LightTailSpec(mean=0.5))
    spike_heavy: Optional[HeavyTailSpec] = Field(None, description="Heavy-tailed spike heights (RH_HT)")

    stationary: bool = Field(True, description="Uniform-shift start instead of a fresh OFF interval")
    burn_in: Optional[float] = Field(None, ge=0, description="Discarded prefix (bins); default 10 mean cycles")

    @model_validator(mode="after")
    def validate_levels(self):
        """Levels strictly coarse to fine, RTT level count within range"""
        means = [level.on_mean for level in self.levels]
        if any(b >= a for a, b in zip(means, means[1:])):
            raise ValueError("levels must be ordered strictly decreasing in on_mean")
        if self.rtt_level_count > len(self.levels):
            raise ValueError("rtt_level_count exceeds the number of levels")
        needs_levels = {ModelKind.MODEL_D, ModelKind.COMBINED, ModelKind.COMBINED_RTT_LEVELS}
        if self.model in needs_levels and not self.levels:
            raise ValueError(f"{self.model.value} needs at least one level")
        return self

    @property
    def bins(self) -> int:
        return 2 ** self.bins_log2
