"""
Traffic Multiresolution Toolkit

Traffic-trace simulators, multiresolution estimators, interval detection and
level/burstiness tools with a batch CLI.
"""

__version__ = "1.0.0"

from .errors import TrafficToolkitError
from .pipeline import RunManager
from .utils import Config, setup_logging, ConfigLoader

__all__ = [
    "TrafficToolkitError",
    "RunManager",
    "Config",
    "setup_logging",
    "ConfigLoader",
]
