"""
Trace models
Packet traces, binned traces, session bitmaps, dyadic views and connection keys.
"""

from typing import Iterable, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .arrays import BitArray, FloatArray


class PacketTrace(BaseModel):
    """
    Ordered (timestamp, size) events
    - timestamps in seconds, nondecreasing, ≥ 0
    - sizes in bytes, ≥ 0 (reals, so simulator weights fit too)
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    timestamps: FloatArray = Field(..., description="Event times (s)")
    sizes: FloatArray = Field(..., description="Event sizes (bytes)")

    @model_validator(mode="after")
    def validate_events(self):
        """Timestamps and sizes must line up and stay in range"""
        if self.timestamps.shape != self.sizes.shape or self.timestamps.ndim != 1:
            raise ValueError("timestamps and sizes must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(self.timestamps)) and np.all(np.isfinite(self.sizes))):
            raise ValueError("timestamps and sizes must be finite")
        if np.any(self.timestamps < 0) or np.any(self.sizes < 0):
            raise ValueError("timestamps and sizes must be nonnegative")
        if np.any(np.diff(self.timestamps) < 0):
            raise ValueError("timestamps must be nondecreasing")
        return self

    @classmethod
    def from_events(cls, events: Iterable[Tuple[float, float]]) -> "PacketTrace":
        """Build from (timestamp, size) pairs that are already ordered"""
        pairs = np.asarray(list(events), dtype=np.float64).reshape(-1, 2)
        return cls(timestamps=pairs[:, 0], sizes=pairs[:, 1])

    @classmethod
    def empty(cls) -> "PacketTrace":
        return cls(timestamps=np.zeros(0), sizes=np.zeros(0))

    @property
    def events(self) -> List[Tuple[float, float]]:
        return list(zip(self.timestamps.tolist(), self.sizes.tolist()))

    @property
    def duration(self) -> float:
        """Largest timestamp (0 for an empty trace)"""
        return float(self.timestamps[-1]) if len(self.timestamps) else 0.0

    @property
    def total_size(self) -> float:
        return float(np.sum(self.sizes))

    def __len__(self) -> int:
        return int(self.timestamps.shape[0])


class BinnedTrace(BaseModel):
    """
    Fixed-width bin sums X_i
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    bin_width: float = Field(..., gt=0, description="Bin width Δ (s)")
    values: FloatArray = Field(..., description="Bin sums, all ≥ 0")

    @model_validator(mode="after")
    def validate_values(self):
        """Bin sums are finite and nonnegative"""
        if self.values.ndim != 1:
            raise ValueError("values must be a 1-D array")
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise ValueError("bin values must be finite and nonnegative")
        return self

    @property
    def total(self) -> float:
        return float(np.sum(self.values))

    def __len__(self) -> int:
        return int(self.values.shape[0])


class SessionBitmap(BaseModel):
    """
    0/1 activity indicator of one connection, one entry per bin
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    bin_width: float = Field(0.001, gt=0, description="Bin width Δ (s)")
    bits: BitArray = Field(..., description="Activity indicator per bin")

    @model_validator(mode="after")
    def validate_bits(self):
        if self.bits.ndim != 1:
            raise ValueError("bits must be a 1-D array")
        return self

    @property
    def ones(self) -> int:
        return int(np.count_nonzero(self.bits))

    def __len__(self) -> int:
        return int(self.bits.shape[0])


class DyadicView(BaseModel):
    """
    A series of exactly 2^m values, the input of every multiresolution estimator
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: FloatArray = Field(..., description="2^m real values")
    m: int = Field(..., ge=1, description="Number of dyadic scales")

    @model_validator(mode="after")
    def validate_length(self):
        """Length must be exactly 2^m"""
        if self.values.ndim != 1 or self.values.shape[0] != 2 ** self.m:
            raise ValueError(f"expected {2 ** self.m} values for m={self.m}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values must be finite")
        return self

    def __len__(self) -> int:
        return int(self.values.shape[0])


class ConnectionKey(BaseModel):
    """
    Sender host, receiver host, sender port and receiver port of a connection
    """

    model_config = ConfigDict(frozen=True)

    sender_host: str = Field(..., min_length=1)
    receiver_host: str = Field(..., min_length=1)
    sender_port: str = Field(..., min_length=1)
    receiver_port: str = Field(..., min_length=1)

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> "ConnectionKey":
        shost, rhost, sport, rport = list(tokens)
        return cls(sender_host=shost, receiver_host=rhost, sender_port=sport, receiver_port=rport)

    @property
    def tokens(self) -> Tuple[str, str, str, str]:
        return (self.sender_host, self.receiver_host, self.sender_port, self.receiver_port)

    def __str__(self) -> str:
        return "_".join(self.tokens)
