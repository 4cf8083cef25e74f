"""
Ground-truth graph construction from poses and object annotations.

Usage:
    scene = derive_detections(scene)                 # 2D boxes from 3D annotations
    gt = build_gt_graph(scene, GtThresholds(1.0, 1.0))
"""

from __future__ import annotations

import logging
from typing import Iterable, Optional

import numpy as np

from msgkit.errors import SceneError
from msgkit.geometry import pairwise_pose_distances, project_box3
from msgkit.geometry.projection import DEFAULT_MIN_AREA, DEFAULT_MIN_VISIBLE_CORNERS, DEFAULT_NEAR
from msgkit.graph import MSGraph, ObjectNode, make_graph
from msgkit.gt.models import Detection, GtThresholds, SceneAnnotation

logger = logging.getLogger(__name__)


def validate_scene(scene: SceneAnnotation) -> list[str]:
    """Return one message per violated scene invariant (empty when valid)."""
    violations: list[str] = []
    for expected, frame in enumerate(scene.frames):
        if frame.frame_id != expected:
            violations.append(f"frame at position {expected} has frame_id {frame.frame_id}")
    if scene.objects3d is not None:
        known = {o.object_id for o in scene.objects3d}
        if len(known) != len(scene.objects3d):
            violations.append("duplicate object_id in objects3d")
        for frame in scene.frames:
            for det in frame.detections:
                if det.object_id is not None and det.object_id not in known:
                    violations.append(f"frame {frame.frame_id}: object_id {det.object_id} missing from objects3d")
    return violations


def collapse_duplicates(detections: Iterable[Detection]) -> list[Detection]:
    """
    Keep one detection per object id, the one with the largest box.

    Anonymous detections are kept as they are. Output follows first-appearance order.
    """
    out: list[Detection] = []
    slot: dict[int, int] = {}
    for det in detections:
        if det.object_id is None:
            out.append(det)
        elif det.object_id not in slot:
            slot[det.object_id] = len(out)
            out.append(det)
        elif det.box.area > out[slot[det.object_id]].box.area:
            out[slot[det.object_id]] = det
    return out


def build_gt_graph(scene: SceneAnnotation, th: Optional[GtThresholds] = None) -> MSGraph:
    """
    Build the ground-truth graph of a scene.

    Places i, j connect iff their translation AND rotation distances are both
    within the (inclusive) thresholds. Objects are the distinct detected ids in
    order of first appearance; a PO edge links a frame to each object it detects.
    """
    th = th or GtThresholds()
    violations = validate_scene(scene)
    if violations:
        raise SceneError("; ".join(violations))

    n = scene.num_frames
    translation, rotation = pairwise_pose_distances([f.pose for f in scene.frames])
    close = (translation <= th.translation) & (rotation <= th.rotation)
    rows, cols = np.nonzero(np.triu(close, k=1))
    pp_edges = [(int(i), int(j)) for i, j in zip(rows, cols)]

    labels = scene.labels()
    objects: dict[int, ObjectNode] = {}
    po_edges: set[tuple[int, int]] = set()
    duplicates = 0
    for frame in scene.frames:
        for det in frame.detections:
            if det.object_id is None:
                raise SceneError(f"anonymous detection in GT build (frame {frame.frame_id})")
            if (frame.frame_id, det.object_id) in po_edges:
                duplicates += 1
            po_edges.add((frame.frame_id, det.object_id))
            if det.object_id not in objects:
                objects[det.object_id] = ObjectNode(det.object_id, labels.get(det.object_id))

    if duplicates:
        logger.debug(f"Scene {scene.scene_id}: collapsed {duplicates} duplicate detections")
    graph = make_graph(n, objects.values(), pp_edges, po_edges)
    logger.info(
        f"Built GT graph for {scene.scene_id}: {n} places, {len(objects)} objects, "
        f"{len(pp_edges)} pp edges, {len(po_edges)} po edges"
    )
    return graph


def derive_detections(
    scene: SceneAnnotation,
    min_area: float = DEFAULT_MIN_AREA,
    near: float = DEFAULT_NEAR,
    min_visible_corners: int = DEFAULT_MIN_VISIBLE_CORNERS,
) -> SceneAnnotation:
    """Regenerate every frame's detections by projecting each annotated 3D object."""
    if scene.objects3d is None:
        raise SceneError(f"scene {scene.scene_id} has no objects3d to derive detections from")

    per_frame: list[tuple[Detection, ...]] = []
    for frame in scene.frames:
        dets = []
        for obj in scene.objects3d:
            box = project_box3(obj.box, frame.pose, frame.intrinsics, min_area, near, min_visible_corners)
            if box is not None:
                dets.append(Detection(box=box, object_id=obj.object_id))
        per_frame.append(tuple(dets))

    total = sum(len(d) for d in per_frame)
    logger.debug(f"Derived {total} detections for {scene.scene_id} across {scene.num_frames} frames")
    return scene.with_detections(per_frame)
