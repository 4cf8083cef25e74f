"""Scene annotations and ground-truth graph construction."""

from msgkit.gt.builder import build_gt_graph, collapse_duplicates, derive_detections, validate_scene
from msgkit.gt.models import Detection, Frame, GtThresholds, Object3D, SceneAnnotation

__all__ = [
    "Detection",
    "Frame",
    "GtThresholds",
    "Object3D",
    "SceneAnnotation",
    "build_gt_graph",
    "collapse_duplicates",
    "derive_detections",
    "validate_scene",
]
