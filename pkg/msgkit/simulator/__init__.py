"""Synthetic scenes with ground truth and planted embeddings for closed-loop verification."""

from msgkit.simulator.config import PLACE_MODES, SimConfig
from msgkit.simulator.embeddings import (
    PlantedObjects,
    distortion_offset,
    object_latents,
    perturb_places,
    plant_object_embeddings,
    plant_place_embeddings_oracle,
    plant_place_embeddings_smooth,
    smooth_bandwidths,
)
from msgkit.simulator.pipeline import SimScene, evaluate_scene, run_end_to_end, simulate, simulate_batch
from msgkit.simulator.scene import camera_rotation, corrupt_detections, generate_scene, random_objects, random_walk

__all__ = [
    "PLACE_MODES",
    "PlantedObjects",
    "SimConfig",
    "SimScene",
    "camera_rotation",
    "corrupt_detections",
    "distortion_offset",
    "evaluate_scene",
    "generate_scene",
    "object_latents",
    "perturb_places",
    "plant_object_embeddings",
    "plant_place_embeddings_oracle",
    "plant_place_embeddings_smooth",
    "random_objects",
    "random_walk",
    "run_end_to_end",
    "simulate",
    "simulate_batch",
    "smooth_bandwidths",
]
