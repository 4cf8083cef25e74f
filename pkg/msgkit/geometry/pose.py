"""Relative pose distances on SE(3)."""

from __future__ import annotations

import numpy as np

from msgkit.geometry.models import Pose


def geodesic_angle(r_a: np.ndarray, r_b: np.ndarray) -> float:
    """Angle of the relative rotation R_a^T R_b, in [0, pi]."""
    cos_theta = (np.trace(r_a.T @ r_b) - 1.0) / 2.0
    return float(np.arccos(np.clip(cos_theta, -1.0, 1.0)))


def relative_pose_distance(a: Pose, b: Pose) -> tuple[float, float]:
    """Return (translation distance in meters, geodesic rotation distance in radians)."""
    translation = float(np.linalg.norm(a.center - b.center))
    return translation, geodesic_angle(a.matrix, b.matrix)


def pairwise_pose_distances(poses: list[Pose]) -> tuple[np.ndarray, np.ndarray]:
    """
    All-pairs distances for an ordered pose list.

    Returns (translation, rotation) matrices of shape NxN; both symmetric with
    zero diagonal.
    """
    n = len(poses)
    if n == 0:
        return np.zeros((0, 0)), np.zeros((0, 0))
    centers = np.stack([p.center for p in poses])
    rotations = np.stack([p.matrix for p in poses])
    translation = np.linalg.norm(centers[:, None, :] - centers[None, :, :], axis=-1)
    # trace(R_i^T R_j) = sum of the elementwise product
    traces = np.einsum("iab,jab->ij", rotations, rotations)
    rotation = np.arccos(np.clip((traces - 1.0) / 2.0, -1.0, 1.0))
    np.fill_diagonal(rotation, 0.0)
    return translation, rotation
