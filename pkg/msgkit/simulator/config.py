"""Simulator configuration."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from typing import Any, Mapping

from msgkit.errors import ConfigError
from msgkit.geometry import Intrinsics
from msgkit.gt import GtThresholds

PLACE_MODES = ("oracle", "smooth")


@dataclass(frozen=True)
class SimConfig:
    """
    One synthetic scene: room, trajectory, objects, detector noise and embedding noise.

    Noise vectors are drawn from N(0, I/dim), so sigma_place and sigma_object are
    noise-to-signal norm ratios independent of the embedding dimension.
    """

    seed: int = 0
    scene_id: str = "sim"
    room_half_size: float = 3.0  # meters
    n_frames: int = 32
    n_objects: int = 8
    step: float = 0.3  # meters per frame
    heading_jitter: float = 0.3  # radians per frame
    embedding_dim: int = 64
    place_mode: str = "oracle"
    sigma_place: float = 0.0
    sigma_object: float = 0.0
    drop_prob: float = 0.0
    jitter_px: float = 0.0
    spurious_rate: float = 0.0  # mean spurious boxes per frame
    thresholds: GtThresholds = field(default_factory=GtThresholds)
    smooth_target_cos: float = 0.3
    object_distortion: float = 0.0
    distortion_seed: int = 0
    fx: float = 200.0
    fy: float = 200.0
    cx: float = 128.0
    cy: float = 96.0
    width: int = 256
    height: int = 192
    min_area: float = 100.0

    def __post_init__(self):
        for name in ("n_frames", "n_objects", "embedding_dim"):
            if getattr(self, name) <= 0:
                raise ConfigError(name, f"must be > 0, got {getattr(self, name)}")
        for name in ("room_half_size", "step"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ConfigError(name, f"must be > 0, got {value}")
        for name in (
            "heading_jitter",
            "sigma_place",
            "sigma_object",
            "jitter_px",
            "spurious_rate",
            "object_distortion",
            "min_area",
        ):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ConfigError(name, f"must be >= 0, got {value}")
        if not 0.0 <= self.drop_prob <= 1.0:
            raise ConfigError("drop_prob", f"must lie in [0, 1], got {self.drop_prob}")
        if not 0.0 < self.smooth_target_cos < 1.0:
            raise ConfigError("smooth_target_cos", f"must lie in (0, 1), got {self.smooth_target_cos}")
        if self.place_mode not in PLACE_MODES:
            raise ConfigError("place_mode", f"must be one of {PLACE_MODES}, got {self.place_mode!r}")
        try:
            self.intrinsics
        except ValueError as e:
            raise ConfigError("intrinsics", str(e)) from e

    @property
    def intrinsics(self) -> Intrinsics:
        return Intrinsics(self.fx, self.fy, self.cx, self.cy, self.width, self.height)

    def for_scene(self, index: int) -> "SimConfig":
        """Config of the index-th scene of a batch: seed xor index."""
        return replace(self, seed=self.seed ^ index, scene_id=f"{self.scene_id}-{index:03d}")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SimConfig":
        """Build from a JSON object; `thresholds` is {"translation", "rotation"}."""
        known = {f.name for f in fields(cls)}
        values = dict(data)
        for key in values:
            if key not in known:
                raise ConfigError(key, "unknown simulator setting")
        if "thresholds" in values:
            th = values["thresholds"]
            if not isinstance(th, Mapping):
                raise ConfigError("thresholds", "must be an object with translation and rotation")
            unknown = set(th) - {"translation", "rotation"}
            if unknown:
                raise ConfigError(f"thresholds.{sorted(unknown)[0]}", "unknown threshold")
            try:
                values["thresholds"] = GtThresholds(**{k: float(v) for k, v in th.items()})
            except (TypeError, ValueError) as e:
                if isinstance(e, ConfigError):
                    raise
                raise ConfigError("thresholds", f"must hold numbers, got {dict(th)}") from e
        defaults = cls()
        for f in fields(cls):
            if f.name in values and f.name != "thresholds":
                values[f.name] = _coerce(f.name, values[f.name], type(getattr(defaults, f.name)))
        return cls(**values)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, GtThresholds):
                value = {"translation": value.translation, "rotation": value.rotation}
            out[f.name] = value
        return out


def _coerce(name: str, value: Any, kind: type) -> Any:
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if kind is int and isinstance(value, int) and not isinstance(value, bool):
        return value
    if kind is str and isinstance(value, str):
        return value
    raise ConfigError(name, f"expected {kind.__name__}, got {value!r}")
