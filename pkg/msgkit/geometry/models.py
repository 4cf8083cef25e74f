"""Geometric value types: camera pose, intrinsics, 2D and 3D boxes.

Quaternions are (w, x, y, z). Poses are world-from-camera; the camera frame
is x right, y down, z forward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial.transform import Rotation

QUAT_NORM_TOL = 1e-6

IDENTITY_QUAT = (1.0, 0.0, 0.0, 0.0)


def _vec(values, n: int, name: str) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    if len(out) != n:
        raise ValueError(f"{name} must have {n} components, got {len(out)}")
    if not all(math.isfinite(v) for v in out):
        raise ValueError(f"{name} must be finite")
    return out


def _unit_quat(values, name: str) -> tuple[float, float, float, float]:
    q = _vec(values, 4, name)
    norm = math.sqrt(sum(v * v for v in q))
    if abs(norm - 1.0) > QUAT_NORM_TOL:
        raise ValueError(f"{name} must be a unit quaternion, norm is {norm:.9f}")
    return q  # type: ignore[return-value]


def rotation_matrix(q: tuple[float, float, float, float]) -> np.ndarray:
    """3x3 rotation matrix of a (w, x, y, z) quaternion."""
    return Rotation.from_quat(q, scalar_first=True).as_matrix()


@dataclass(frozen=True)
class Pose:
    """World-from-camera pose; translation is the camera center in meters."""

    rotation: tuple[float, float, float, float] = IDENTITY_QUAT
    translation: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "rotation", _unit_quat(self.rotation, "rotation"))
        object.__setattr__(self, "translation", _vec(self.translation, 3, "translation"))

    @classmethod
    def from_matrix(cls, rotation: np.ndarray, translation) -> "Pose":
        q = Rotation.from_matrix(rotation).as_quat(scalar_first=True)
        q = q / np.linalg.norm(q)
        return cls(tuple(float(v) for v in q), tuple(float(v) for v in translation))

    @cached_property
    def matrix(self) -> np.ndarray:
        return rotation_matrix(self.rotation)

    @property
    def center(self) -> np.ndarray:
        return np.asarray(self.translation, dtype=np.float64)

    def world_to_camera(self, points: np.ndarray) -> np.ndarray:
        """Transform Nx3 world points into the camera frame: R^T (p - t)."""
        return (np.asarray(points, dtype=np.float64) - self.center) @ self.matrix


@dataclass(frozen=True)
class Intrinsics:
    """Pinhole intrinsics in pixels."""

    fx: float
    fy: float
    cx: float
    cy: float
    width: int = 256
    height: int = 192

    def __post_init__(self):
        if not (self.fx > 0 and self.fy > 0):
            raise ValueError(f"focal lengths must be positive, got fx={self.fx}, fy={self.fy}")
        if not (0 < self.cx < self.width and 0 < self.cy < self.height):
            raise ValueError(
                f"principal point ({self.cx}, {self.cy}) outside image {self.width}x{self.height}"
            )


@dataclass(frozen=True)
class Box2:
    """Axis-aligned image box in corner form (pixels)."""

    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self):
        if not (self.x1 < self.x2 and self.y1 < self.y2):
            raise ValueError(f"invalid box [{self.x1}, {self.y1}, {self.x2}, {self.y2}]")

    @property
    def area(self) -> float:
        return (self.x2 - self.x1) * (self.y2 - self.y1)

    def to_list(self) -> list[float]:
        return [self.x1, self.y1, self.x2, self.y2]


@dataclass(frozen=True)
class Box3:
    """Oriented 3D box: center and half extents in meters, orientation as (w, x, y, z)."""

    center: tuple[float, float, float]
    half_extents: tuple[float, float, float]
    orientation: tuple[float, float, float, float] = IDENTITY_QUAT

    def __post_init__(self):
        object.__setattr__(self, "center", _vec(self.center, 3, "center"))
        half = _vec(self.half_extents, 3, "half_extents")
        if not all(h > 0 for h in half):
            raise ValueError(f"half_extents must be positive, got {half}")
        object.__setattr__(self, "half_extents", half)
        object.__setattr__(self, "orientation", _unit_quat(self.orientation, "orientation"))

    def corners(self) -> np.ndarray:
        """The 8 corners in world coordinates (8x3)."""
        signs = np.array([[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)], dtype=np.float64)
        local = signs * np.asarray(self.half_extents)
        return local @ rotation_matrix(self.orientation).T + np.asarray(self.center)
