"""Pose algebra, pinhole projection of 3D boxes and 2D box overlap."""

from msgkit.geometry.boxes import box_iou, giou
from msgkit.geometry.models import Box2, Box3, Intrinsics, Pose, rotation_matrix
from msgkit.geometry.pose import geodesic_angle, pairwise_pose_distances, relative_pose_distance
from msgkit.geometry.projection import project_box3, project_points

__all__ = [
    "Box2",
    "Box3",
    "Intrinsics",
    "Pose",
    "box_iou",
    "geodesic_angle",
    "giou",
    "pairwise_pose_distances",
    "project_box3",
    "project_points",
    "relative_pose_distance",
    "rotation_matrix",
]
