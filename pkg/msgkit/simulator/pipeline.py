"""
End-to-end simulation: scene, ground truth, detector stream, embeddings, evaluation.

Usage:
    sim = simulate(SimConfig(seed=3))
    report = run_end_to_end(SimConfig(seed=3))
    scenes = simulate_batch(SimConfig(), count=20)     # per-scene seed = seed ^ index
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from msgkit.association import AssocConfig, EmbeddingSet, build_pred_graph
from msgkit.embedlab import Projector, TrainingScene
from msgkit.graph import MSGraph
from msgkit.gt import Detection, SceneAnnotation, build_gt_graph
from msgkit.metrics import EvalReport, evaluate
from msgkit.simulator.config import SimConfig
from msgkit.simulator.embeddings import (
    perturb_places,
    plant_object_embeddings,
    plant_place_embeddings_oracle,
    plant_place_embeddings_smooth,
)
from msgkit.simulator.scene import corrupt_detections, generate_scene

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SimScene:
    """
    One simulated scene.

    `scene` holds the clean detections the gt graph is built from; `detections`
    is the detector stream (true ids kept, spurious boxes anonymous) that `emb`
    is aligned with.
    """

    config: SimConfig
    scene: SceneAnnotation
    gt: MSGraph
    detections: tuple[tuple[Detection, ...], ...]
    emb: EmbeddingSet
    oracle_tau_place: Optional[float] = None
    latents_orthogonal: bool = True

    def anonymous_detections(self) -> list[tuple[Detection, ...]]:
        """The detector stream as a predictor sees it: no object ids."""
        return [tuple(d.with_id(None) for d in dets) for dets in self.detections]

    def detector_scene(self) -> SceneAnnotation:
        """The scene with its detections replaced by the anonymous detector stream."""
        return self.scene.with_detections(self.anonymous_detections())

    def training_scene(self) -> TrainingScene:
        ids = tuple(tuple(d.object_id for d in dets) for dets in self.detections)
        return TrainingScene(emb=self.emb, gt=self.gt, object_ids=ids)

    def assoc_config(self, base: Optional[AssocConfig] = None) -> AssocConfig:
        """Association thresholds for this scene; oracle mode uses its planted place threshold."""
        base = base or AssocConfig()
        if self.oracle_tau_place is None:
            return base
        return AssocConfig(self.oracle_tau_place, base.tau_object, base.bank_update)


def simulate(cfg: SimConfig) -> SimScene:
    scene = generate_scene(cfg)
    gt = build_gt_graph(scene, cfg.thresholds)
    detections = corrupt_detections(scene, cfg)

    oracle_tau = None
    if cfg.place_mode == "oracle":
        place, oracle_tau = plant_place_embeddings_oracle(gt, cfg.embedding_dim)
        place = perturb_places(place, cfg)
    else:
        place = plant_place_embeddings_smooth(scene, cfg)

    objects = plant_object_embeddings(detections, cfg)
    emb = EmbeddingSet(cfg.embedding_dim, place, objects.embeddings)
    return SimScene(
        config=cfg,
        scene=scene,
        gt=gt,
        detections=tuple(detections),
        emb=emb,
        oracle_tau_place=oracle_tau,
        latents_orthogonal=objects.latents_orthogonal,
    )


def simulate_batch(cfg: SimConfig, count: int) -> list[SimScene]:
    """`count` scenes with seeds cfg.seed ^ index."""
    return [simulate(cfg.for_scene(i)) for i in range(count)]


def evaluate_scene(
    sim: SimScene, assoc: Optional[AssocConfig] = None, projector: Optional[Projector] = None
) -> EvalReport:
    """
    Predict the graph of a simulated scene (optionally through a projector) and score it.

    Recall@1 is left as None when the gt has no PP edges, since no query has a neighbor.
    """
    emb = projector.apply(sim.emb) if projector is not None else sim.emb
    result = build_pred_graph(emb, sim.assoc_config(assoc), sim.anonymous_detections())
    similarity = result.similarity if sim.gt.pp_edges else None
    if similarity is None:
        logger.info(f"Scene {sim.scene.scene_id} has no gt PP edges; skipping Recall@1")
    return evaluate(sim.gt, result.graph, sim.scene, result.detections, similarity, sim.scene.scene_id)


def run_end_to_end(
    cfg: SimConfig, assoc: Optional[AssocConfig] = None, projector: Optional[Projector] = None
) -> EvalReport:
    """Generate, plant embeddings, predict and evaluate one scene."""
    report = evaluate_scene(simulate(cfg), assoc, projector)
    logger.info(f"End-to-end {cfg.scene_id} (seed {cfg.seed}): PP IoU {report.pp_iou:.2f}, PO IoU {report.po_iou:.2f}")
    return report
