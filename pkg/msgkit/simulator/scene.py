"""
Synthetic scenes: a random-walk camera in a box room looking at random boxes.

Every random draw comes from a generator keyed by (seed, component), so each
component is a pure function of the config.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from msgkit.geometry import Box2, Box3, Pose
from msgkit.gt import Detection, Frame, Object3D, SceneAnnotation, derive_detections
from msgkit.simulator.config import SimConfig

logger = logging.getLogger(__name__)

CAMERA_HEIGHT = 1.5  # meters
WALL_MARGIN = 0.5  # meters
SPURIOUS_SIZE = (16.0, 64.0)  # pixels

LABELS = ("chair", "table", "sofa", "bed", "cabinet", "lamp", "shelf", "tv", "plant", "desk", "stool", "bin")

# Generator tags
TRAJECTORY, OBJECTS, DETECTOR, PLACE, OBJECT_LATENT, OBJECT_NOISE, DISTORTION = range(7)


def rng_for(seed: int, tag: int) -> np.random.Generator:
    return np.random.default_rng([seed, tag])


def camera_rotation(yaw: float) -> np.ndarray:
    """World-from-camera rotation of a level camera facing yaw (columns: right, down, forward)."""
    c, s = math.cos(yaw), math.sin(yaw)
    return np.array([[s, 0.0, c], [-c, 0.0, s], [0.0, -1.0, 0.0]])


def random_walk(cfg: SimConfig) -> list[Pose]:
    """Seeded camera trajectory; the camera turns around when the next step would leave the room."""
    rng = rng_for(cfg.seed, TRAJECTORY)
    limit = max(cfg.room_half_size - WALL_MARGIN, 0.0)
    position = rng.uniform(-limit / 2, limit / 2, size=2)
    yaw = float(rng.uniform(-math.pi, math.pi))

    poses = []
    for t in range(cfg.n_frames):
        if t:
            yaw += float(rng.uniform(-cfg.heading_jitter, cfg.heading_jitter))
            heading = np.array([math.cos(yaw), math.sin(yaw)])
            if np.any(np.abs(position + cfg.step * heading) > limit):
                yaw += math.pi
                heading = -heading
            position = np.clip(position + cfg.step * heading, -limit, limit)
        yaw = math.remainder(yaw, math.tau)
        center = (float(position[0]), float(position[1]), CAMERA_HEIGHT)
        poses.append(Pose.from_matrix(camera_rotation(yaw), center))
    return poses


def random_objects(cfg: SimConfig) -> list[Object3D]:
    """Boxes resting on the floor at random positions and yaw."""
    rng = rng_for(cfg.seed, OBJECTS)
    limit = max(cfg.room_half_size - WALL_MARGIN, 0.0)
    objects = []
    for k in range(cfg.n_objects):
        half = rng.uniform(0.15, 0.5, size=3)
        xy = rng.uniform(-limit, limit, size=2)
        yaw = float(rng.uniform(-math.pi, math.pi))
        box = Box3(
            center=(float(xy[0]), float(xy[1]), float(half[2])),
            half_extents=tuple(float(h) for h in half),
            orientation=(math.cos(yaw / 2), 0.0, 0.0, math.sin(yaw / 2)),
        )
        objects.append(Object3D(object_id=k, box=box, label=LABELS[k % len(LABELS)]))
    return objects


def generate_scene(cfg: SimConfig) -> SceneAnnotation:
    """A clean annotated scene: trajectory, 3D objects and their projected 2D boxes."""
    intrinsics = cfg.intrinsics
    frames = [Frame(t, pose, intrinsics) for t, pose in enumerate(random_walk(cfg))]
    scene = SceneAnnotation(cfg.scene_id, tuple(frames), tuple(random_objects(cfg)))
    scene = derive_detections(scene, min_area=cfg.min_area)
    logger.debug(
        f"Generated {cfg.scene_id}: {cfg.n_frames} frames, {cfg.n_objects} objects, "
        f"{sum(len(f.detections) for f in scene.frames)} detections"
    )
    return scene


def _jitter_box(box: Box2, cfg: SimConfig, rng: np.random.Generator) -> Box2:
    offsets = rng.uniform(-cfg.jitter_px, cfg.jitter_px, size=4)
    x1, y1, x2, y2 = np.array(box.to_list()) + offsets
    x1, x2 = np.clip([x1, x2], 0.0, cfg.width)
    y1, y2 = np.clip([y1, y2], 0.0, cfg.height)
    if x1 >= x2 or y1 >= y2:
        return box
    return Box2(float(x1), float(y1), float(x2), float(y2))


def _spurious_box(cfg: SimConfig, rng: np.random.Generator) -> Box2:
    w, h = rng.uniform(*SPURIOUS_SIZE, size=2)
    x1 = float(rng.uniform(0.0, cfg.width - w))
    y1 = float(rng.uniform(0.0, cfg.height - h))
    return Box2(x1, y1, x1 + float(w), y1 + float(h))


def corrupt_detections(scene: SceneAnnotation, cfg: SimConfig) -> list[tuple[Detection, ...]]:
    """
    The detector stream: clean detections with drops, box jitter and spurious boxes.

    Surviving detections keep their true object ids; spurious ones have none.
    """
    rng = rng_for(cfg.seed, DETECTOR)
    stream = []
    for frame in scene.frames:
        dets = []
        for det in frame.detections:
            if rng.random() < cfg.drop_prob:
                continue
            box = _jitter_box(det.box, cfg, rng) if cfg.jitter_px > 0 else det.box
            dets.append(Detection(box=box, object_id=det.object_id, score=det.score))
        for _ in range(int(rng.poisson(cfg.spurious_rate)) if cfg.spurious_rate > 0 else 0):
            dets.append(Detection(box=_spurious_box(cfg, rng)))
        stream.append(tuple(dets))
    return stream
