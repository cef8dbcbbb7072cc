"""
Multiresolution profiles
Per-scale Averaging / Energy values and autocorrelation series.
"""

from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .arrays import FloatArray, IntArray


class Definition(str, Enum):
    """Estimator definition: disjoint blocks (1) or all circular shifts (2)"""

    DEF1 = "1"
    DEF2 = "2"


class ProfileKind(str, Enum):
    AVERAGING = "averaging"
    ENERGY = "energy"


class MultiresProfile(BaseModel):
    """
    Averaging A_j^[p] or Energy E_j indexed by scale
    - DEF1 labels scales j = 1..m, DEF2 labels j = 0..m-1
    - the scale with label j uses blocks of 2^block_exponent values
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    scale_values: FloatArray = Field(..., description="A_j or E_j, one per scale")
    p: float = Field(..., gt=0, description="Averaging exponent (2 for Energy)")
    m: int = Field(..., ge=1, description="log2 of the series length")
    definition: Definition
    kind: ProfileKind

    @model_validator(mode="after")
    def validate_values(self):
        """One nonnegative value per scale"""
        if self.scale_values.shape != (self.m,):
            raise ValueError(f"expected {self.m} scale values, got {self.scale_values.shape}")
        if np.any(self.scale_values < 0) or not np.all(np.isfinite(self.scale_values)):
            raise ValueError("scale values must be finite and nonnegative")
        return self

    @property
    def first_scale(self) -> int:
        return 1 if self.definition == Definition.DEF1 else 0

    @property
    def scales(self) -> np.ndarray:
        """Scale labels j in this profile's convention"""
        return np.arange(self.first_scale, self.first_scale + self.m)

    @property
    def octaves(self) -> np.ndarray:
        """Definition-1 labels, where log2 E = j - 2 + 2 log2 A holds for both definitions"""
        return np.arange(1, self.m + 1)

    def log2_values(self) -> np.ndarray:
        """log2 of the scale values, NaN where the value is 0"""
        out = np.full(self.m, np.nan)
        positive = self.scale_values > 0
        out[positive] = np.log2(self.scale_values[positive])
        return out

    def value_at(self, j: int) -> float:
        return float(self.scale_values[j - self.first_scale])


class AutocorrSeries(BaseModel):
    """
    Corr(k) for lags 0..K with the global mean and variance used
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    lags: IntArray
    values: FloatArray
    variance: float = Field(..., ge=0)
    mean: float
    circular: bool = Field(False, description="Lags wrap around the series end")

    @model_validator(mode="after")
    def validate_series(self):
        """Lags and values line up, |Corr| stays within 1"""
        if self.lags.shape != self.values.shape:
            raise ValueError("lags and values must have equal length")
        if np.any(np.abs(self.values) > 1 + 1e-9):
            raise ValueError("autocorrelation values must lie in [-1, 1]")
        return self
