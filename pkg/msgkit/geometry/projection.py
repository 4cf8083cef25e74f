"""Pinhole projection of oriented 3D boxes into image boxes."""

from __future__ import annotations

from typing import Optional

import numpy as np

from msgkit.geometry.models import Box2, Box3, Intrinsics, Pose

DEFAULT_MIN_AREA = 100.0
DEFAULT_NEAR = 0.05
DEFAULT_MIN_VISIBLE_CORNERS = 1


def project_points(points_cam: np.ndarray, intr: Intrinsics) -> np.ndarray:
    """Project Nx3 camera-frame points (z > 0) to Nx2 pixel coordinates."""
    z = points_cam[:, 2]
    u = intr.fx * points_cam[:, 0] / z + intr.cx
    v = intr.fy * points_cam[:, 1] / z + intr.cy
    return np.stack([u, v], axis=1)


def project_box3(
    box: Box3,
    cam: Pose,
    intr: Intrinsics,
    min_area: float = DEFAULT_MIN_AREA,
    near: float = DEFAULT_NEAR,
    min_visible_corners: int = DEFAULT_MIN_VISIBLE_CORNERS,
) -> Optional[Box2]:
    """
    Image box of a 3D box as the clipped hull of its visible projected corners.

    Returns None when fewer than `min_visible_corners` corners lie beyond the
    near plane, or when the clipped box is degenerate or smaller than `min_area`.
    """
    if near <= 0:
        raise ValueError(f"near must be positive, got {near}")
    corners = cam.world_to_camera(box.corners())
    visible = corners[corners[:, 2] > near]
    if len(visible) < max(1, min_visible_corners):
        return None

    uv = project_points(visible, intr)
    x1 = float(np.clip(uv[:, 0].min(), 0.0, intr.width))
    x2 = float(np.clip(uv[:, 0].max(), 0.0, intr.width))
    y1 = float(np.clip(uv[:, 1].min(), 0.0, intr.height))
    y2 = float(np.clip(uv[:, 1].max(), 0.0, intr.height))
    if x2 <= x1 or y2 <= y1:
        return None
    if (x2 - x1) * (y2 - y1) < min_area:
        return None
    return Box2(x1, y1, x2, y2)
