"""
Configuration Management
Environment variables and toolkit-wide defaults.
"""

import os
from typing import Optional, Dict, Any
from pathlib import Path
from dotenv import load_dotenv


class Config:
    """
    Toolkit configuration
    Reads environment variables (optionally from a .env file) with defaults
    """

    def __init__(self, env_file: Optional[str] = None):
        if env_file:
            load_dotenv(env_file)
        else:
            env_path = Path.cwd() / ".env"
            if env_path.exists():
                load_dotenv(env_path)

    # Logging Configuration
    @property
    def log_level(self) -> str:
        """Log level"""
        return os.getenv("LOG_LEVEL", "INFO")

    @property
    def log_format(self) -> str:
        """Log format (json/text)"""
        return os.getenv("LOG_FORMAT", "json")

    # Simulation defaults
    @property
    def default_seed(self) -> int:
        """Seed used when neither config file nor flags set one"""
        return int(os.getenv("DEFAULT_SEED", "0"))

    @property
    def default_bin_width(self) -> float:
        """Bin width in seconds"""
        return float(os.getenv("DEFAULT_BIN_WIDTH", "0.001"))

    # Kolmogorov regimes
    @property
    def gaussian_threshold(self) -> float:
        return float(os.getenv("GAUSSIAN_THRESHOLD", "0.08"))

    @property
    def intermediate_threshold(self) -> float:
        return float(os.getenv("INTERMEDIATE_THRESHOLD", "0.1"))

    @property
    def far_threshold(self) -> float:
        return float(os.getenv("FAR_THRESHOLD", "0.2"))

    @property
    def energy_zero_anchor(self) -> bool:
        """Shift log2 profiles so the first scale sits at 0"""
        return os.getenv("ENERGY_ZERO_ANCHOR", "false").lower() == "true"

    # Directories
    @property
    def output_dir(self) -> Path:
        """Default output directory"""
        return Path(os.getenv("OUTPUT_DIR", "out"))

    @property
    def logs_dir(self) -> Path:
        """Log file directory"""
        return Path(os.getenv("LOGS_DIR", "logs"))

    def ensure_directories(self):
        """Create output and log directories"""
        for directory in [self.output_dir, self.logs_dir]:
            directory.mkdir(parents=True, exist_ok=True)

    def get_thresholds(self) -> Dict[str, float]:
        """Kolmogorov regime thresholds as keyword arguments of classify_distance"""
        return {
            "gaussian": self.gaussian_threshold,
            "intermediate": self.intermediate_threshold,
            "far": self.far_threshold,
        }

    def get_all_config(self) -> Dict[str, Any]:
        """All configuration as a dict"""
        return {
            "logging": {
                "level": self.log_level,
                "format": self.log_format,
            },
            "simulation": {
                "seed": self.default_seed,
                "bin_width": self.default_bin_width,
            },
            "analysis": {
                "thresholds": self.get_thresholds(),
                "energy_zero_anchor": self.energy_zero_anchor,
            },
            "directories": {
                "output": str(self.output_dir),
                "logs": str(self.logs_dir),
            },
        }
