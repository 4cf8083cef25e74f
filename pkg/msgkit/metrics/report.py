"""
Evaluation reports: one scene, or many scenes aggregated.

Usage:
    report = evaluate(gt, pred, gt_scene, pred_dets, similarity)
    mean = aggregate_reports([report_a, report_b])
    table = reports_frame([report_a, report_b])   # pandas summary with a mean row
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from msgkit.graph import MSGraph
from msgkit.gt import Detection, SceneAnnotation
from msgkit.metrics.iou import EdgeCounts, po_counts, pp_counts
from msgkit.metrics.matching import ObjectMatching, match_objects
from msgkit.metrics.recall import recall_at_1

logger = logging.getLogger(__name__)

MEAN_ROW = "mean"


@dataclass(frozen=True)
class EvalReport:
    """Recall@1, PP IoU, PO IoU (percent) with the counts and matching behind them."""

    recall_at_1: Optional[float]
    pp_iou: float
    po_iou: float
    pp: EdgeCounts = field(default_factory=EdgeCounts)
    po: EdgeCounts = field(default_factory=EdgeCounts)
    matching: ObjectMatching = field(default_factory=ObjectMatching)
    graph_iou: float = 0.0
    scene_id: Optional[str] = None

    def __post_init__(self):
        for name in ("recall_at_1", "pp_iou", "po_iou", "graph_iou"):
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 100.0:
                raise ValueError(f"{name} must be a percentage, got {value}")


def evaluate(
    gt: MSGraph,
    pred: MSGraph,
    gt_scene: SceneAnnotation,
    pred_dets: Sequence[Sequence[Detection]],
    similarity: Optional[np.ndarray] = None,
    scene_id: Optional[str] = None,
) -> EvalReport:
    """Score a predicted graph; recall is None when no similarity matrix is given."""
    pp = pp_counts(gt, pred)
    matching = match_objects(gt_scene, pred_dets)
    po = po_counts(gt, pred, matching)
    recall = recall_at_1(similarity, gt) if similarity is not None else None
    report = EvalReport(
        recall_at_1=recall,
        pp_iou=100.0 * pp.iou,
        po_iou=100.0 * po.iou,
        pp=pp,
        po=po,
        matching=matching,
        graph_iou=100.0 * (pp + po).iou,
        scene_id=scene_id if scene_id is not None else gt_scene.scene_id,
    )
    logger.info(
        f"Evaluated {report.scene_id}: PP IoU {report.pp_iou:.2f}, PO IoU {report.po_iou:.2f}, "
        f"Recall@1 {'n/a' if recall is None else f'{recall:.2f}'}"
    )
    return report


def aggregate_reports(reports: Sequence[EvalReport]) -> EvalReport:
    """
    Unweighted per-scene mean of the percentages, with edge counts summed.

    Recall is averaged over the reports that carry it (None if none do).
    """
    if not reports:
        raise ValueError("cannot aggregate zero reports")
    recalls = [r.recall_at_1 for r in reports if r.recall_at_1 is not None]
    pp = sum((r.pp for r in reports), EdgeCounts())
    po = sum((r.po for r in reports), EdgeCounts())
    return EvalReport(
        recall_at_1=float(np.mean(recalls)) if recalls else None,
        pp_iou=float(np.mean([r.pp_iou for r in reports])),
        po_iou=float(np.mean([r.po_iou for r in reports])),
        pp=pp,
        po=po,
        graph_iou=float(np.mean([r.graph_iou for r in reports])),
        scene_id=MEAN_ROW,
    )


def reports_frame(reports: Sequence[EvalReport], with_mean: bool = True) -> pd.DataFrame:
    """One row per scene (in the given order) plus an optional mean row."""
    rows = list(reports)
    if with_mean and rows:
        rows.append(aggregate_reports(reports))
    records = [
        {
            "scene": r.scene_id,
            "recall_at_1": np.nan if r.recall_at_1 is None else r.recall_at_1,
            "pp_iou": r.pp_iou,
            "po_iou": r.po_iou,
            "graph_iou": r.graph_iou,
            "pp_tp": r.pp.tp,
            "pp_fp": r.pp.fp,
            "pp_fn": r.pp.fn,
            "po_tp": r.po.tp,
            "po_fp": r.po.fp,
            "po_fn": r.po.fn,
        }
        for r in rows
    ]
    return pd.DataFrame.from_records(records).set_index("scene") if records else pd.DataFrame()
