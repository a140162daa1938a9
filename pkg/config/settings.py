#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Outer Billiards - Simulation Settings

Manages numeric tolerances, subdivision caps, rendering defaults and worker
counts. Defaults are merged with a YAML file and the OBC_THREADS variable.
"""

import copy
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml


THREADS_ENV_VAR = "OBC_THREADS"
DEFAULT_CONFIG_FILE = Path(__file__).resolve().parent.parent / "config_billiards.yaml"


DEFAULTS: Dict[str, Any] = {
    "app": {
        "log_level": "INFO",
        "log_file": None,
    },
    "geometry": {
        "singular_tol": 1e-12,  # scaled by max(1, ||P||)
        "angle_tol": 1e-9,      # radians
    },
    "subdivision": {
        "disc_sides": 64,
        "max_cells": 10_000_000,
        "sliver_factor": 1e-14,  # times r^2
    },
    "certification": {
        "safety": 1.25,
        "max_depth": 120,
        "inclusion_tol": 1e-12,
    },
    "basins": {
        "max_iter": 10_000,
        "tol": 1e-9,
        "resolution": [512, 512],
    },
    "transversality": {
        "grid_samples": 1_000_000,
        "root_grid": 20_000,
    },
    "performance": {
        "threads": 1,
    },
    "run": {
        "seed": 0,
    },
}


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class SimulationSettings:
    """Manages simulation settings and their persistence."""

    def __init__(self, config_file: Optional[Union[str, Path]] = None):
        """Initialize settings manager.

        Args:
            config_file: YAML file to read overrides from. The repository's
                config_billiards.yaml is used when omitted.
        """
        self.logger = logging.getLogger(__name__)
        self.config_file = Path(config_file) if config_file else DEFAULT_CONFIG_FILE
        self.defaults = copy.deepcopy(DEFAULTS)
        self.settings = copy.deepcopy(DEFAULTS)

    def load(self) -> bool:
        """Load settings from the YAML file and the environment.

        Returns:
            bool: True when a configuration file was read
        """
        loaded = False
        if self.config_file.exists():
            with open(self.config_file, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
            if not isinstance(data, dict):
                raise ValueError(f"Configuration root must be a mapping: {self.config_file}")
            self.settings = _deep_merge(self.defaults, data)
            loaded = True
            self.logger.debug(f"Settings loaded from {self.config_file}")
        else:
            self.logger.debug("No configuration file found, using defaults")

        threads = os.environ.get(THREADS_ENV_VAR)
        if threads:
            try:
                self.set_nested("performance.threads", max(1, int(threads)))
            except ValueError:
                self.logger.warning(f"Ignoring non-integer {THREADS_ENV_VAR}={threads!r}")
        return loaded

    def save(self, file_path: Optional[Union[str, Path]] = None) -> Path:
        """Save current settings as YAML.

        Args:
            file_path: Destination, defaults to the loaded config file

        Returns:
            Path: The written file
        """
        target = Path(file_path) if file_path else self.config_file
        with open(target, "w", encoding="utf-8") as f:
            yaml.safe_dump(self.settings, f, sort_keys=True)
        self.logger.info(f"Settings saved to {target}")
        return target

    def export_settings(self, file_path: Union[str, Path]) -> None:
        """Export the effective settings as JSON."""
        with open(file_path, "w", encoding="utf-8") as f:
            json.dump(self.settings, f, indent=2, sort_keys=True)
        self.logger.info(f"Settings exported to: {file_path}")

    def get(self, key: str, default: Any = None) -> Any:
        """Get a top-level setting section."""
        return self.settings.get(key, default)

    def get_nested(self, path: str, default: Any = None) -> Any:
        """Get a nested setting value using dot notation (e.g., 'basins.tol')."""
        value: Any = self.settings
        try:
            for key in path.split("."):
                value = value[key]
            return value
        except (KeyError, TypeError):
            return default

    def set_nested(self, path: str, value: Any) -> None:
        """Set a nested setting value using dot notation."""
        keys = path.split(".")
        setting = self.settings
        for key in keys[:-1]:
            setting = setting.setdefault(key, {})
        setting[keys[-1]] = value
        self.logger.debug(f"Nested setting updated: {path} = {value}")

    def reset_to_defaults(self) -> None:
        """Reset all settings to default values."""
        self.settings = copy.deepcopy(self.defaults)

    @property
    def threads(self) -> int:
        return max(1, int(self.get_nested("performance.threads", 1)))


# Global settings instance
_settings: Optional[SimulationSettings] = None


def get_settings() -> SimulationSettings:
    """Get the global settings instance, loading it on first use.

    Returns:
        SimulationSettings: Global settings
    """
    global _settings
    if _settings is None:
        _settings = SimulationSettings()
        _settings.load()
    return _settings


def initialize_settings(config_file: Optional[Union[str, Path]] = None) -> SimulationSettings:
    """Create, load and install the global settings instance.

    Args:
        config_file: Optional YAML file

    Returns:
        SimulationSettings: Loaded settings
    """
    global _settings
    _settings = SimulationSettings(config_file)
    _settings.load()
    return _settings
