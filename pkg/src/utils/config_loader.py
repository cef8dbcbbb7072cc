"""
Run Configuration Loader
Loads simulator and IDA configurations from YAML or key=value files, resolves
presets and applies the defaults < preset < file < flags precedence.
"""

import yaml
from typing import Dict, Any, Optional, List
from pathlib import Path
from dotenv import dotenv_values
from pydantic import ValidationError
import structlog

from ..errors import ConfigError
from ..models.ida import IdaConfig
from ..models.simulation import MODEL_ALIASES, SimConfig
from ..simulation.presets import parse_level_label, preset_overrides

logger = structlog.get_logger(__name__)

YAML_SUFFIXES = {".yaml", ".yml"}
NULL_WORDS = {"none", "null", "~"}
BOOL_WORDS = {"true": True, "false": False, "yes": True, "no": False}
SECTION_KEYS = {"ida", "preset"}


def _scalar(text: Optional[str]) -> Any:
    """key=value text to a Python value; pydantic coerces numeric strings"""
    if text is None:
        return None
    value = text.strip()
    if value.lower() in NULL_WORDS:
        return None
    if value.lower() in BOOL_WORDS:
        return BOOL_WORDS[value.lower()]
    return value


def unflatten(flat: Dict[str, Any]) -> Dict[str, Any]:
    """Dotted keys (load.p, ida.gamma) to nested dicts"""
    nested: Dict[str, Any] = {}
    for key, value in flat.items():
        parts = key.strip().split(".")
        node = nested
        for part in parts[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError(f"key {key} conflicts with a scalar value", keys=[key])
            node = child
        node[parts[-1]] = value
    return nested


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursive dict merge, override wins; None replaces a whole nested section"""
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _normalize_sim_fields(data: Dict[str, Any]) -> Dict[str, Any]:
    """Model aliases and level labels to their SimConfig form"""
    out = dict(data)
    model = out.get("model")
    if isinstance(model, str):
        out["model"] = MODEL_ALIASES.get(model.strip().lower(), model.strip().lower())
    levels = out.get("levels")
    if isinstance(levels, (str, int)):
        out["levels"] = [level.model_dump(mode="json") for level in parse_level_label(str(levels))]
    return out


def _config_error(error: ValidationError, source: str) -> ConfigError:
    keys = [".".join(str(part) for part in item["loc"]) for item in error.errors()]
    messages = [f"{'.'.join(str(part) for part in item['loc'])}: {item['msg']}" for item in error.errors()]
    return ConfigError(f"invalid {source}: " + "; ".join(messages), keys=keys)


class ConfigLoader:
    """
    Loads and validates run configurations
    - YAML files hold nested sections (load, off, rtt, levels, ida, ...)
    - key=value files use dotted keys and level labels (levels=7/12/17)
    """

    @staticmethod
    def load_file(file_path: str) -> Dict[str, Any]:
        """
        Raw nested configuration dict of a file

        Args:
            file_path: YAML or key=value file

        Returns:
            Nested dict (empty for an empty file)
        """
        path = Path(file_path)
        if not path.exists():
            raise ConfigError(f"config file not found: {file_path}", keys=[])

        if path.suffix.lower() in YAML_SUFFIXES:
            try:
                with open(path, 'r', encoding='utf-8') as f:
                    raw = yaml.safe_load(f)
            except yaml.YAMLError as e:
                logger.error("YAML parse error", path=file_path, error=str(e))
                raise ConfigError(f"YAML syntax error: {e}", keys=[]) from e
            if raw is None:
                return {}
            if not isinstance(raw, dict):
                raise ConfigError("config root must be a mapping", keys=[])
            return raw

        flat = {key: _scalar(value) for key, value in dotenv_values(path).items()}
        return unflatten(flat)

    @staticmethod
    def resolve_sim_config(
        preset: Optional[str] = None,
        config_file: Optional[str] = None,
        overrides: Optional[Dict[str, Any]] = None,
        base: Optional[Dict[str, Any]] = None,
    ) -> SimConfig:
        """
        SimConfig from defaults, preset, config file and flag overrides, in that order

        Args:
            preset: Preset name or level label; the file's "preset" key is used if absent
            config_file: YAML or key=value file
            overrides: Nested flag values (None values are ignored)
            base: Environment defaults (seed, bin_width) below the preset

        Returns:
            Validated SimConfig with every default materialized
        """
        file_data = ConfigLoader.load_file(config_file) if config_file else {}
        preset = preset or file_data.get("preset")

        merged: Dict[str, Any] = dict(base or {})
        if preset:
            merged = deep_merge(merged, preset_overrides(str(preset)))
        sim_fields = {key: value for key, value in file_data.items() if key not in SECTION_KEYS}
        merged = deep_merge(merged, _normalize_sim_fields(sim_fields))
        flags = {key: value for key, value in (overrides or {}).items() if value is not None}
        merged = deep_merge(merged, _normalize_sim_fields(flags))

        try:
            config = SimConfig(**merged)
        except ValidationError as e:
            error = _config_error(e, "simulation config")
            logger.error("Simulation config validation failed", keys=error.context["keys"])
            raise error from e

        logger.info(
            "Simulation config resolved",
            preset=preset,
            config_file=config_file,
            model=config.model.value,
            users=config.users,
            bins_log2=config.bins_log2,
            seed=config.seed,
        )
        return config

    @staticmethod
    def resolve_ida_config(
        config_file: Optional[str] = None,
        overrides: Optional[Dict[str, Any]] = None,
    ) -> IdaConfig:
        """
        IdaConfig from defaults, the file's "ida" section and flag overrides

        Returns:
            Validated IdaConfig
        """
        file_data = ConfigLoader.load_file(config_file) if config_file else {}
        section = file_data.get("ida") or {}
        flags = {key: value for key, value in (overrides or {}).items() if value is not None}
        try:
            return IdaConfig(**deep_merge(section, flags))
        except ValidationError as e:
            raise _config_error(e, "IDA config") from e

    @staticmethod
    def validate_config_syntax(file_path: str) -> Dict[str, Any]:
        """
        Checks a config file without running anything

        Args:
            file_path: YAML or key=value file

        Returns:
            Validation result dict (valid, errors, warnings, model, bins)
        """
        result: Dict[str, Any] = {
            "valid": False,
            "errors": [],
            "warnings": []
        }

        try:
            raw = ConfigLoader.load_file(file_path)
            if not raw:
                result["warnings"].append("config file is empty, defaults apply")
            config = ConfigLoader.resolve_sim_config(config_file=file_path)
            if raw.get("ida"):
                ConfigLoader.resolve_ida_config(config_file=file_path)
            result["valid"] = True
            result["model"] = config.model.value
            result["bins"] = config.bins
            result["users"] = config.users
            if config.model.value in ("model_d", "combined", "combined_rtt_levels") and config.rtt is None:
                result["warnings"].append("rtt is none: sessions have no RTT spikes")

        except ConfigError as e:
            result["errors"].append(e.message)
            result["keys"] = e.context.get("keys", [])
        except Exception as e:
            result["errors"].append(f"Unexpected error: {str(e)}")

        return result

    @staticmethod
    def create_example_config(output_path: str) -> bool:
        """
        Writes an example configuration (YAML, or key=value for other suffixes)

        Args:
            output_path: Output file path

        Returns:
            Success flag
        """
        example = {
            "preset": "7/12/17",
            "model": "combined_rtt_levels",
            "users": 16,
            "bins_log2": 17,
            "seed": 7,
            "load": {"p": 1.5, "scale": 1.0},
            "rtt": {"family": "exponential", "mean": 2.0},
            "slow_start_max": 8,
            "rtt_level_count": 1,
            "ida": {"base": 2.0, "gamma": 0.1, "c1": 3.0, "c2": 0.3},
        }

        try:
            output_file = Path(output_path)
            output_file.parent.mkdir(parents=True, exist_ok=True)

            if output_file.suffix.lower() in YAML_SUFFIXES:
                with open(output_file, 'w', encoding='utf-8') as f:
                    yaml.safe_dump(example, f, default_flow_style=False, sort_keys=False, indent=2)
            else:
                lines = _flatten_lines(example)
                output_file.write_text("\n".join(lines) + "\n", encoding='utf-8')

            logger.info("Example config created", path=output_path)
            return True

        except Exception as e:
            logger.error("Example config could not be created", path=output_path, error=str(e))
            return False


def _flatten_lines(data: Dict[str, Any], prefix: str = "") -> List[str]:
    lines = []
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            lines.extend(_flatten_lines(value, f"{name}."))
        else:
            lines.append(f"{name}={value}")
    return lines

