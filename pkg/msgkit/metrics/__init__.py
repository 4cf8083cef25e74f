"""Evaluation suite: graph IoU, truth-to-result matching, PP/PO IoU, Recall@K."""

from msgkit.metrics.iou import (
    EdgeCounts,
    adjacency_iou,
    edge_counts,
    graph_iou,
    po_counts,
    po_iou,
    pp_counts,
    pp_iou,
)
from msgkit.metrics.matching import (
    Assignment,
    MatchScore,
    ObjectMatching,
    build_tracks,
    match_objects,
    match_tracks,
    pair_match_score,
    score_matrix,
    solve_assignment,
)
from msgkit.metrics.recall import recall_at_1, recall_at_k
from msgkit.metrics.report import EvalReport, aggregate_reports, evaluate, reports_frame

__all__ = [
    "Assignment",
    "EdgeCounts",
    "EvalReport",
    "MatchScore",
    "ObjectMatching",
    "adjacency_iou",
    "aggregate_reports",
    "build_tracks",
    "edge_counts",
    "evaluate",
    "graph_iou",
    "match_objects",
    "match_tracks",
    "pair_match_score",
    "po_counts",
    "po_iou",
    "pp_counts",
    "pp_iou",
    "recall_at_1",
    "recall_at_k",
    "reports_frame",
    "score_matrix",
    "solve_assignment",
]
