"""
Interval detection models
IDA parameters and the full result of one (or several superposed) sessions.
"""

from typing import List, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .arrays import FloatArray, IntArray


class IdaConfig(BaseModel):
    """
    Interval detection parameters
    - base: class of a run of length L is floor(log_base L)
    - gamma: negligibility threshold of the stage normalization
    - c1 > c2: column rescaling thresholds of the representation step
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    base: float = Field(2.0, gt=1)
    gamma: float = Field(0.1, gt=0, lt=1)
    c1: float = Field(3.0, gt=0)
    c2: float = Field(0.3, gt=0)
    epsilon: float = Field(1e-12, gt=0, description="Floor of every divisor")
    gap_normalization: Literal["row", "session"] = Field(
        "row", description="Divide s(i) by w(I) of row i, or by the session length"
    )
    normalize_gaps: bool = Field(False, description="Apply the column rescaling to s as well")
    zero_column: bool = Field(False, description="Insert a zero column before s in im")

    @model_validator(mode="after")
    def validate_thresholds(self):
        if not self.c1 > self.c2:
            raise ValueError("c1 must be greater than c2")
        return self


class IdaResult(BaseModel):
    """
    IDA output
    - rows are length classes j, columns of the stage arrays are fill stages i
    - gap_histogram / stage_array: raw run-length masses
    - gap_weights / stage_weights: after the per-row normalization, before rescaling
    - im: rescaled stages plus the gap column, every column scaled to max 1 for display
    - v1, v0: 1-interval and 0-interval evidence per class, max 1
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    config: IdaConfig
    session_length: int = Field(..., ge=1)
    sessions: int = Field(1, ge=1, description="Number of superposed sessions")

    gap_histogram: FloatArray
    stage_array: FloatArray
    fill_weights: FloatArray
    cutoff_stages: IntArray

    gap_weights: FloatArray
    stage_weights: FloatArray

    stages: FloatArray
    im: FloatArray
    v1: FloatArray
    v0: FloatArray

    artifact_class: int = Field(..., ge=0, description="Class of the whole-session run")
    artifact_stages: List[int] = Field(default_factory=list, description="Stages that only see the whole session")

    @model_validator(mode="after")
    def validate_geometry(self):
        """Stage array is classes x stages, stage count is one more than class count"""
        classes, stage_count = self.stage_array.shape
        if stage_count != classes + 1:
            raise ValueError("stage count must equal class count + 1")
        if self.gap_histogram.shape != (classes,) or self.fill_weights.shape != (stage_count,):
            raise ValueError("gap histogram / fill weights do not match the stage array")
        if np.any(self.im < 0) or np.any(self.im > 1 + 1e-12):
            raise ValueError("im entries must lie in [0, 1]")
        return self

    @property
    def classes(self) -> int:
        return int(self.stage_array.shape[0])

    @property
    def stage_count(self) -> int:
        return int(self.stage_array.shape[1])

    def v1_without_artifact(self) -> np.ndarray:
        """v1 recomputed with the whole-session cells removed, max 1"""
        stages = np.array(self.stages)
        for stage in self.artifact_stages:
            stages[self.artifact_class, stage] = 0.0
        v1 = stages.sum(axis=1)
        peak = v1.max()
        return v1 / peak if peak > 0 else v1
