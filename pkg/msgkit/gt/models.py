"""Data models for scene annotations and ground-truth construction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from msgkit.errors import ConfigError
from msgkit.geometry import Box2, Box3, Intrinsics, Pose


@dataclass(frozen=True)
class Detection:
    """One object detection in one frame; object_id is None for anonymous predictions."""

    box: Box2
    object_id: Optional[int] = None
    score: Optional[float] = None

    def with_id(self, object_id: Optional[int]) -> "Detection":
        return Detection(box=self.box, object_id=object_id, score=self.score)


@dataclass(frozen=True)
class Frame:
    """One image of the scene: its place id, camera and detections."""

    frame_id: int
    pose: Pose
    intrinsics: Intrinsics
    detections: tuple[Detection, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "detections", tuple(self.detections))


@dataclass(frozen=True)
class Object3D:
    """An annotated 3D object."""

    object_id: int
    box: Box3
    label: Optional[str] = None


@dataclass(frozen=True)
class SceneAnnotation:
    """Frames of one scene in capture order, with optional 3D object annotations."""

    scene_id: str
    frames: tuple[Frame, ...] = ()
    objects3d: Optional[tuple[Object3D, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))
        if self.objects3d is not None:
            object.__setattr__(self, "objects3d", tuple(self.objects3d))

    @property
    def num_frames(self) -> int:
        return len(self.frames)

    def detections_per_frame(self) -> list[tuple[Detection, ...]]:
        return [f.detections for f in self.frames]

    def labels(self) -> dict[int, Optional[str]]:
        return {o.object_id: o.label for o in self.objects3d or ()}

    def with_detections(self, detections: list[tuple[Detection, ...]]) -> "SceneAnnotation":
        """Copy with each frame's detections replaced."""
        frames = tuple(
            Frame(f.frame_id, f.pose, f.intrinsics, tuple(dets))
            for f, dets in zip(self.frames, detections, strict=True)
        )
        return SceneAnnotation(self.scene_id, frames, self.objects3d)


@dataclass(frozen=True)
class GtThresholds:
    """Pose thresholds under which two images capture the same place."""

    translation: float = 1.0  # meters
    rotation: float = 1.0  # radians

    def __post_init__(self):
        for name in ("translation", "rotation"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ConfigError(f"thresholds.{name}", f"must be a non-negative number, got {value}")
