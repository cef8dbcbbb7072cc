"""
Utilities Package
Configuration, logging, config and trace loading, output writers.
"""

from .config import Config
from .logger import setup_logging, RunLogger
from .config_loader import ConfigLoader

__all__ = [
    "Config",
    "setup_logging",
    "RunLogger",
    "ConfigLoader",
]
