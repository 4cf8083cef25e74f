"""
Settings - Single source of truth for msgkit configuration.

Usage:
    settings = Settings.from_file('run.json')          # JSON config file (optional)
    settings.apply_overrides({'tau_place': 0.25})        # command-line flags win
    tau = settings.get('tau_place')

Precedence: flags > config file > environment > DEFAULTS.
Every key is read by at least one command; library functions keep their own
keyword defaults, and the projection entries reuse those constants.
"""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path
from typing import Any, Mapping

from msgkit.errors import ConfigError
from msgkit.geometry.projection import DEFAULT_MIN_AREA, DEFAULT_MIN_VISIBLE_CORNERS, DEFAULT_NEAR

logger = logging.getLogger(__name__)

# Default settings - every tunable the commands expose lives here
DEFAULTS: dict[str, Any] = {
    # Ground-truth construction: same place iff within both thresholds
    "gt_translation_threshold": 1.0,  # meters
    "gt_rotation_threshold": 1.0,  # radians
    # 3D box projection (build-gt --derive-detections)
    "min_box_area": DEFAULT_MIN_AREA,  # px^2
    "near_plane": DEFAULT_NEAR,  # meters
    "min_visible_corners": DEFAULT_MIN_VISIBLE_CORNERS,
    # Association
    "tau_place": 0.3,
    "tau_object": 0.2,
    "bank_update": "running_mean",  # 'running_mean' or 'replace'
    # Losses and diagnostics
    "positive_weight": 10.0,
    "bce_scale": 10.0,
    "coding_rate_eps": 0.5,
    # Linear probe
    "learning_rate": 2e-5,
    "weight_decay": 0.01,
    "epochs": 30,
    "scenes_per_batch": 6,
    "frames_per_scene": 64,
    "place_loss_weight": 1.0,
    "object_loss_weight": 1.0,
    "max_pairs_per_step": 4096,
    "seed": 0,
    # Directory-mode evaluation
    "num_workers": 4,
}

# Environment variables that may seed a setting
ENV_KEYS = {
    "MSG_NUM_WORKERS": "num_workers",
}


def _coerce(key: str, value: Any) -> Any:
    """Coerce a raw value to the type of its default."""
    default = DEFAULTS[key]
    if value is None or default is None:
        return value
    try:
        if isinstance(default, bool):
            if isinstance(value, str):
                return value.strip().lower() in ("1", "true", "yes", "on")
            return bool(value)
        if isinstance(default, int):
            return int(value)
        if isinstance(default, float):
            return float(value)
        return str(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(key, f"cannot interpret {value!r} as {type(default).__name__}") from e


class Settings:
    """Layered configuration: DEFAULTS, then environment, then config file, then flags."""

    def __init__(self, values: Mapping[str, Any] | None = None, use_env: bool = True):
        self._values: dict[str, Any] = DEFAULTS.copy()
        if use_env:
            self._apply_env()
        if values:
            self.update(values)

    @classmethod
    def from_file(cls, path: str | Path | None, use_env: bool = True) -> "Settings":
        """Build settings from an optional JSON config file."""
        settings = cls(use_env=use_env)
        if path is None:
            return settings
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
        if not isinstance(data, dict):
            raise ConfigError("config", "config file must hold a JSON object")
        settings.update(data)
        logger.debug(f"Loaded {len(data)} settings from {path}")
        return settings

    def _apply_env(self) -> None:
        for env_key, key in ENV_KEYS.items():
            raw = os.environ.get(env_key)
            if raw:
                self._values[key] = _coerce(key, raw)

    def get(self, key: str, default: Any = None) -> Any:
        """Get a setting value."""
        value = self._values.get(key)
        if value is None:
            return default
        return value

    def set(self, key: str, value: Any) -> None:
        """Set a setting value."""
        if key not in DEFAULTS:
            raise ConfigError(key, "unknown setting")
        self._values[key] = _coerce(key, value)

    def update(self, values: Mapping[str, Any]) -> None:
        """Set many values at once; unknown keys are rejected."""
        for key, value in values.items():
            self.set(key, value)

    def apply_overrides(self, flags: Mapping[str, Any]) -> None:
        """Apply command-line flags; None means 'flag not given'."""
        for key, value in flags.items():
            if value is not None:
                self.set(key, value)

    def all(self) -> dict[str, Any]:
        """Get all settings with defaults applied."""
        return dict(self._values)
