"""
Simulator presets
Named baseline simulations and level labels such as "8", "12S" or "7/12/17".
"""

import re
from typing import Any, Dict, List

import structlog

from ..errors import ConfigError
from ..models.simulation import LevelSpec, LightTailFamily, ModelKind

logger = structlog.get_logger(__name__)

BASELINE_PRESETS: Dict[str, Dict[str, Any]] = {
    "0-1": {"model": ModelKind.MODEL_A.value},
    "ARR": {"model": ModelKind.MODEL_B.value},
    "slow-start": {"model": ModelKind.MODEL_C.value, "slow_start_max": 16},
    "RH": {"model": ModelKind.RH.value},
    "RH_HT": {"model": ModelKind.RH_HT.value},
    "ARRRH": {"model": ModelKind.ARRRH.value},
    "EXP_IID": {"model": ModelKind.EXP_IID.value},
    "HT_IID": {"model": ModelKind.HT_IID.value},
}

LEVEL_TOKEN = re.compile(r"^(\d+)(S?)$")


def parse_level_label(label: str) -> List[LevelSpec]:
    """
    Levels from a label of exponents joined by "/", coarse or fine first

    Args:
        label: e.g. "8", "12S", "7/12/17", "7S/12/17"; S marks a sharp level

    Returns:
        LevelSpecs ordered coarse to fine, 1- and 0-interval means 2^e bins
    """
    levels = []
    for token in label.strip().split("/"):
        match = LEVEL_TOKEN.match(token.strip().upper())
        if not match:
            raise ConfigError(f"invalid level label: {label}", keys=["levels"])
        exponent = int(match.group(1))
        if exponent > 30:
            raise ConfigError(f"level exponent too large: {exponent}", keys=["levels"])
        mean = float(2 ** exponent)
        levels.append(
            LevelSpec(
                on_mean=mean,
                off_mean=mean,
                family=LightTailFamily.EXPONENTIAL,
                sharp=bool(match.group(2)),
            )
        )
    return sorted(levels, key=lambda level: level.on_mean, reverse=True)


def is_level_label(name: str) -> bool:
    return all(LEVEL_TOKEN.match(token.strip().upper()) for token in name.strip().split("/"))


def preset_overrides(name: str) -> Dict[str, Any]:
    """
    SimConfig fields of a named preset

    Args:
        name: Baseline name (case-insensitive, "-" and "_" and spaces interchangeable
              except for "0-1") or a level label

    Returns:
        Dict of field overrides, nested specs as dicts
    """
    if is_level_label(name):
        levels = parse_level_label(name)
        return {
            "model": ModelKind.MODEL_D.value,
            "levels": [level.model_dump(mode="json") for level in levels],
            "rtt": {"family": LightTailFamily.EXPONENTIAL.value, "mean": 2.0},
        }

    lookup = {key.upper().replace("-", "_"): value for key, value in BASELINE_PRESETS.items()}
    key = name.strip().upper().replace("-", "_").replace(" ", "_")
    if name.strip() == "0-1":
        key = "0_1"
    if key not in lookup:
        raise ConfigError(f"unknown preset: {name}", keys=["preset"], known=sorted(BASELINE_PRESETS))

    logger.debug("Preset resolved", preset=name)
    return dict(lookup[key])
