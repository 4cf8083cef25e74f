"""
Scene file: frames with pose, intrinsics and detections, plus optional 3D objects.

Poses are {"q": [w, x, y, z], "t": [x, y, z]}, world-from-camera.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Optional, Sequence

from msgkit.errors import FormatError, SceneError
from msgkit.geometry import Box2, Box3, Intrinsics, Pose
from msgkit.gt import Detection, Frame, Object3D, SceneAnnotation, validate_scene
from msgkit.io.atomic import read_json, require, write_json_atomic


def detection_to_dict(det: Detection) -> dict[str, Any]:
    return {"object_id": det.object_id, "box": det.box.to_list(), "score": det.score}


def detection_from_dict(data: Any, where: str) -> Detection:
    object_id = require(data, "object_id", where)
    score = data.get("score")
    return Detection(
        box=Box2(*(float(v) for v in require(data, "box", where))),
        object_id=None if object_id is None else int(object_id),
        score=None if score is None else float(score),
    )


def _pose_to_dict(pose: Pose) -> dict[str, Any]:
    return {"q": list(pose.rotation), "t": list(pose.translation)}


def _intrinsics_to_dict(intr: Intrinsics) -> dict[str, Any]:
    return {"fx": intr.fx, "fy": intr.fy, "cx": intr.cx, "cy": intr.cy, "width": intr.width, "height": intr.height}


def scene_to_dict(scene: SceneAnnotation) -> dict[str, Any]:
    frames = [
        {
            "frame_id": f.frame_id,
            "pose": _pose_to_dict(f.pose),
            "intrinsics": _intrinsics_to_dict(f.intrinsics),
            "detections": [detection_to_dict(d) for d in f.detections],
        }
        for f in scene.frames
    ]
    objects3d: Optional[list[dict[str, Any]]] = None
    if scene.objects3d is not None:
        objects3d = [
            {
                "object_id": o.object_id,
                "center": list(o.box.center),
                "half_extents": list(o.box.half_extents),
                "q": list(o.box.orientation),
                "label": o.label,
            }
            for o in scene.objects3d
        ]
    return {"scene_id": scene.scene_id, "frames": frames, "objects3d": objects3d}


def _frame_from_dict(data: Any, where: str) -> Frame:
    pose = require(data, "pose", where)
    intr = require(data, "intrinsics", where)
    return Frame(
        frame_id=int(require(data, "frame_id", where)),
        pose=Pose(tuple(require(pose, "q", f"{where}.pose")), tuple(require(pose, "t", f"{where}.pose"))),
        intrinsics=Intrinsics(
            fx=float(require(intr, "fx", where)),
            fy=float(require(intr, "fy", where)),
            cx=float(require(intr, "cx", where)),
            cy=float(require(intr, "cy", where)),
            width=int(intr.get("width", 256)),
            height=int(intr.get("height", 192)),
        ),
        detections=tuple(
            detection_from_dict(d, f"{where}.detections[{k}]") for k, d in enumerate(require(data, "detections", where))
        ),
    )


def scene_from_dict(data: Any, where: str = "scene") -> SceneAnnotation:
    """Parse a scene and check its invariants; invalid content raises FormatError or SceneError."""
    try:
        raw_frames = require(data, "frames", where)
        frames = tuple(_frame_from_dict(f, f"{where}.frames[{t}]") for t, f in enumerate(raw_frames))
        raw_objects = data.get("objects3d")
        objects3d = None
        if raw_objects is not None:
            objects3d = tuple(
                Object3D(
                    object_id=int(require(o, "object_id", f"{where}.objects3d")),
                    box=Box3(
                        tuple(require(o, "center", f"{where}.objects3d")),
                        tuple(require(o, "half_extents", f"{where}.objects3d")),
                        tuple(o.get("q", (1.0, 0.0, 0.0, 0.0))),
                    ),
                    label=o.get("label"),
                )
                for o in raw_objects
            )
        scene = SceneAnnotation(str(require(data, "scene_id", where)), frames, objects3d)
    except (TypeError, ValueError) as e:
        if isinstance(e, FormatError):
            raise
        raise FormatError(f"{where}: malformed scene ({e})") from e
    violations = validate_scene(scene)
    if violations:
        raise SceneError(f"{where}: " + "; ".join(violations))
    return scene


def save_scene(path: str | Path, scene: SceneAnnotation) -> Path:
    return write_json_atomic(path, scene_to_dict(scene))


def load_scene(path: str | Path) -> SceneAnnotation:
    return scene_from_dict(read_json(path), str(path))


def detections_to_dict(scene_id: str, detections: Sequence[Sequence[Detection]]) -> dict[str, Any]:
    """Predicted detections file: boxes with predicted object ids, per frame."""
    return {
        "scene_id": scene_id,
        "frames": [
            {"frame_id": t, "detections": [detection_to_dict(d) for d in dets]} for t, dets in enumerate(detections)
        ],
    }


def detections_from_dict(data: Any, where: str = "detections") -> list[tuple[Detection, ...]]:
    try:
        frames = require(data, "frames", where)
        out = []
        for t, frame in enumerate(frames):
            if int(require(frame, "frame_id", where)) != t:
                raise FormatError(f"{where}: frame at position {t} has frame_id {frame['frame_id']}")
            out.append(
                tuple(
                    detection_from_dict(d, f"{where}.frames[{t}]")
                    for d in require(frame, "detections", f"{where}.frames[{t}]")
                )
            )
    except (TypeError, ValueError) as e:
        if isinstance(e, FormatError):
            raise
        raise FormatError(f"{where}: malformed detections ({e})") from e
    return out


def save_detections(path: str | Path, scene_id: str, detections: Sequence[Sequence[Detection]]) -> Path:
    return write_json_atomic(path, detections_to_dict(scene_id, detections))


def load_detections(path: str | Path) -> list[tuple[Detection, ...]]:
    return detections_from_dict(read_json(path), str(path))
