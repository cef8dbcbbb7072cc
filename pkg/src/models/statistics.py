"""
Statistic result models
Empirical marginals, windowed Kolmogorov distances and the level/burstiness tool outputs.
"""

from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .arrays import FloatArray, IntArray


class EmpiricalCdf(BaseModel):
    """
    Right-continuous step function F_n with steps of 1/n
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    sorted_samples: FloatArray

    @model_validator(mode="after")
    def validate_sorted(self):
        if np.any(np.diff(self.sorted_samples) < 0):
            raise ValueError("samples must be sorted ascending")
        return self

    @property
    def n(self) -> int:
        return int(self.sorted_samples.shape[0])

    def evaluate(self, t) -> np.ndarray:
        """F_n(t) = #{x_i ≤ t} / n"""
        counts = np.searchsorted(self.sorted_samples, np.asarray(t, dtype=np.float64), side="right")
        return counts / self.n


class KolmogorovSeries(BaseModel):
    """
    Kolmogorov distance of every non-overlapping window, NaN for degenerate windows
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    window_size: int = Field(..., ge=2)
    distances: FloatArray
    window_traffic: FloatArray

    @model_validator(mode="after")
    def validate_series(self):
        if self.distances.shape != self.window_traffic.shape:
            raise ValueError("distances and window_traffic must have equal length")
        finite = self.distances[np.isfinite(self.distances)]
        if np.any(finite < 0) or np.any(finite > 1):
            raise ValueError("distances must lie in [0, 1]")
        return self

    @property
    def valid_mask(self) -> np.ndarray:
        return np.isfinite(self.distances)

    @property
    def missing_count(self) -> int:
        return int(np.count_nonzero(~self.valid_mask))

    def __len__(self) -> int:
        return int(self.distances.shape[0])


class SlopeSeries(BaseModel):
    """
    Tool 1 output
    - slopes[i] = log2 A(j) - log2 A(j-1), labelled by slope_scales
    - changes[i] sits between two consecutive slopes, labelled by change_scales
    - NaN marks positions broken by missing scales
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    slope_scales: IntArray
    slopes: FloatArray
    change_scales: IntArray
    changes: FloatArray
    epsilon: float = Field(0.01, gt=0)
    levels: List[int] = Field(default_factory=list, description="Local maxima of the changes")
    ranked_levels: List[int] = Field(default_factory=list, description="Levels by decreasing change")

    @model_validator(mode="after")
    def validate_lengths(self):
        if self.changes.shape[0] != max(self.slopes.shape[0] - 1, 0):
            raise ValueError("expected one change per pair of consecutive slopes")
        finite = self.changes[np.isfinite(self.changes)]
        if np.any(finite < 0):
            raise ValueError("relative slope changes must be nonnegative")
        return self


class FlatRegions(BaseModel):
    """
    Tool 2 output: flags F(j) = 1 where the slope exceeds the threshold
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    slope_scales: IntArray
    slopes: FloatArray
    flags: List[bool]
    threshold: float = -0.1
    regions: List[Tuple[int, int]] = Field(default_factory=list, description="Inclusive scale ranges")

    def covers(self, j: int) -> bool:
        return any(start <= j <= end for start, end in self.regions)


class BurstinessReport(BaseModel):
    """
    Tool 3 / Tool 4 indices
    - D: mean Kolmogorov distance of the coarse versions
    - O: distance-weighted mean of distance/traffic correlations
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    k: int = Field(..., ge=1)
    s: Optional[int] = Field(None, ge=1, description="Window exponent of Tool 4")
    D: Optional[float] = Field(None, ge=0)
    per_scale_D: Optional[FloatArray] = None
    O: Optional[float] = Field(None, ge=-1 - 1e-12, le=1 + 1e-12)
    per_scale_C: Optional[FloatArray] = None
    per_scale_Dbar: Optional[FloatArray] = None
    excluded_scales: List[int] = Field(default_factory=list)

    def merge(self, other: "BurstinessReport") -> "BurstinessReport":
        """Combine a Tool 3 report with a Tool 4 report"""
        update = {
            name: getattr(other, name)
            for name in ("s", "D", "per_scale_D", "O", "per_scale_C", "per_scale_Dbar")
            if getattr(self, name) is None and getattr(other, name) is not None
        }
        update["excluded_scales"] = sorted(set(self.excluded_scales) | set(other.excluded_scales))
        return self.model_copy(update=update)
