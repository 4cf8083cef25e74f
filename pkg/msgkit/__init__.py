"""
msgkit - Multiview scene graph toolkit.

Builds ground-truth place+object graphs from posed scenes, predicts graphs
from embeddings, scores predictions and simulates scenes to test it all.

Usage:
    from msgkit import SimConfig, simulate, build_pred_graph, evaluate

    sim = simulate(SimConfig(seed=1))
    result = build_pred_graph(sim.emb, sim.assoc_config(), sim.anonymous_detections())
    report = evaluate(sim.gt, result.graph, sim.scene, result.detections, result.similarity)
"""

from msgkit.association import AssocConfig, EmbeddingSet, build_pred_graph
from msgkit.errors import (
    ConfigError,
    EmbeddingError,
    FormatError,
    GraphValidationError,
    MSGError,
    MetricError,
    SceneError,
)
from msgkit.graph import MSGraph, ObjectNode, from_adjacency, to_adjacency, validate
from msgkit.gt import GtThresholds, SceneAnnotation, build_gt_graph
from msgkit.metrics import EvalReport, evaluate
from msgkit.settings import Settings
from msgkit.simulator import SimConfig, run_end_to_end, simulate
from msgkit.version import VERSION

__all__ = [
    "VERSION",
    "AssocConfig",
    "ConfigError",
    "EmbeddingError",
    "EmbeddingSet",
    "EvalReport",
    "FormatError",
    "GraphValidationError",
    "GtThresholds",
    "MSGError",
    "MSGraph",
    "MetricError",
    "ObjectNode",
    "SceneAnnotation",
    "SceneError",
    "Settings",
    "SimConfig",
    "build_gt_graph",
    "build_pred_graph",
    "evaluate",
    "from_adjacency",
    "run_end_to_end",
    "simulate",
    "to_adjacency",
    "validate",
]
