"""
Pipeline
Planning, execution and verification of CLI runs.
"""

from .planner import AnalysisPlanner, ANALYSES
from .executor import StepExecutor
from .verifier import RunVerifier
from .manager import RunManager, INPUT_FORMATS

__all__ = [
    "AnalysisPlanner",
    "ANALYSES",
    "StepExecutor",
    "RunVerifier",
    "RunManager",
    "INPUT_FORMATS",
]
