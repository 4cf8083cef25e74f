"""
Graph IoU over aligned edge sets, and the PP / PO IoU metrics built on it.

A "positive" is the presence of an edge, so IoU = TP / (TP + FP + FN).
`adjacency_iou` is the equivalent block-matrix form: the overlap region of the
two matrices is compared entrywise and every 1 outside it (edges touching an
unmatched extra vertex) is added to the denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable

import numpy as np

from msgkit.errors import MetricError
from msgkit.graph import MSGraph
from msgkit.metrics.matching import ObjectMatching


@dataclass(frozen=True)
class EdgeCounts:
    """True positive, false positive and false negative edge counts."""

    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def iou(self) -> float:
        """TP / (TP + FP + FN); two empty edge sets agree perfectly."""
        denom = self.tp + self.fp + self.fn
        if denom == 0:
            return 1.0
        return self.tp / denom

    def __add__(self, other: "EdgeCounts") -> "EdgeCounts":
        return EdgeCounts(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn)

    def to_dict(self) -> dict[str, int]:
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn}


def edge_counts(gt_edges: Iterable[Hashable], pred_edges: Iterable[Hashable]) -> EdgeCounts:
    gt = set(gt_edges)
    pred = set(pred_edges)
    return EdgeCounts(tp=len(gt & pred), fp=len(pred - gt), fn=len(gt - pred))


def graph_iou(gt_edges: Iterable[Hashable], pred_edges: Iterable[Hashable]) -> float:
    """IoU of two edge sets over a shared, already aligned vertex universe."""
    return edge_counts(gt_edges, pred_edges).iou


def adjacency_iou(a: np.ndarray, b: np.ndarray) -> float:
    """
    IoU of two binary adjacency matrices whose leading rows/columns are aligned.

    Rows beyond min(m_A, m_B) and columns beyond min(n_A, n_B) belong to
    unmatched vertices; their 1-entries (w_A, w_B) only enlarge the union.
    """
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    m = min(a.shape[0], b.shape[0])
    n = min(a.shape[1], b.shape[1])
    a_core, b_core = a[:m, :n], b[:m, :n]
    inter = int(np.count_nonzero(a_core & b_core))
    union = int(np.count_nonzero(a_core | b_core))
    w_a = int(np.count_nonzero(a)) - int(np.count_nonzero(a_core))
    w_b = int(np.count_nonzero(b)) - int(np.count_nonzero(b_core))
    denom = union + w_a + w_b
    if denom == 0:
        return 1.0
    return inter / denom


def _check_places(gt: MSGraph, pred: MSGraph) -> None:
    if gt.num_places != pred.num_places:
        raise MetricError(f"place count mismatch: gt has {gt.num_places}, prediction has {pred.num_places}")


def pp_counts(gt: MSGraph, pred: MSGraph) -> EdgeCounts:
    """PP edge counts; place correspondence is the identity."""
    _check_places(gt, pred)
    return edge_counts(gt.pp_edges, pred.pp_edges)


def pp_iou(gt: MSGraph, pred: MSGraph) -> float:
    """PP IoU in percent."""
    return 100.0 * pp_counts(gt, pred).iou


def _aligned_po_edges(gt: MSGraph, pred: MSGraph, matching: ObjectMatching):
    gt_ids = set(gt.object_ids)
    pred_ids = set(pred.object_ids)
    for g, p, _ in matching.pairs:
        if g not in gt_ids:
            raise MetricError(f"matching references unknown gt object {g}")
        if p not in pred_ids:
            raise MetricError(f"matching references unknown predicted object {p}")
    renamed = matching.pred_to_gt()
    gt_edges = {(i, ("gt", k)) for i, k in gt.po_edges}
    pred_edges = {(i, ("gt", renamed[k]) if k in renamed else ("pred", k)) for i, k in pred.po_edges}
    return gt_edges, pred_edges


def po_counts(gt: MSGraph, pred: MSGraph, matching: ObjectMatching) -> EdgeCounts:
    """
    PO edge counts after renaming matched predicted objects to their gt partner.

    Edges of unmatched predicted objects can only be false positives, edges of
    unmatched gt objects only false negatives.
    """
    _check_places(gt, pred)
    gt_edges, pred_edges = _aligned_po_edges(gt, pred, matching)
    return edge_counts(gt_edges, pred_edges)


def po_iou(gt: MSGraph, pred: MSGraph, matching: ObjectMatching) -> float:
    """PO IoU in percent."""
    return 100.0 * po_counts(gt, pred, matching).iou
