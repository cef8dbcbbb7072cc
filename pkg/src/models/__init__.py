"""
Domain models
Traces, profiles, statistics, simulation and IDA configuration, run manifests.
"""

from .trace import PacketTrace, BinnedTrace, SessionBitmap, DyadicView, ConnectionKey
from .profiles import Definition, ProfileKind, MultiresProfile, AutocorrSeries
from .statistics import (
    EmpiricalCdf,
    KolmogorovSeries,
    SlopeSeries,
    FlatRegions,
    BurstinessReport,
)
from .simulation import (
    ModelKind,
    MODEL_ALIASES,
    LightTailFamily,
    HeavyTailSpec,
    LightTailSpec,
    LevelSpec,
    SimConfig,
)
from .ida import IdaConfig, IdaResult
from .manifest import RunManifest

__all__ = [
    "PacketTrace",
    "BinnedTrace",
    "SessionBitmap",
    "DyadicView",
    "ConnectionKey",
    "Definition",
    "ProfileKind",
    "MultiresProfile",
    "AutocorrSeries",
    "EmpiricalCdf",
    "KolmogorovSeries",
    "SlopeSeries",
    "FlatRegions",
    "BurstinessReport",
    "ModelKind",
    "MODEL_ALIASES",
    "LightTailFamily",
    "HeavyTailSpec",
    "LightTailSpec",
    "LevelSpec",
    "SimConfig",
    "IdaConfig",
    "IdaResult",
    "RunManifest",
]
