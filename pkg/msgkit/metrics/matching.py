"""
Truth-to-result object matching.

Each gt object gamma and predicted object tau is a track: at most one box per
frame. Their score accumulates GIoU over co-present frames (c), normalizes by
the union of their appearances (u), and the one-to-one matching minimizes
sum(1 - m) with the Hungarian method.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from msgkit.errors import MetricError, SceneError
from msgkit.geometry import Box2, giou
from msgkit.gt import Detection, SceneAnnotation, collapse_duplicates

logger = logging.getLogger(__name__)

Track = Mapping[int, Box2]


@dataclass(frozen=True)
class MatchScore:
    """Accumulated GIoU (c), appearance union (u) and normalized score m = c / u."""

    c: float
    u: int
    m: float


@dataclass(frozen=True)
class Assignment:
    """A one-to-one assignment: parallel row/column index tuples and its total cost."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    total: float

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.rows, self.cols))


@dataclass(frozen=True)
class ObjectMatching:
    """One-to-one alignment between gt and predicted objects."""

    pairs: tuple[tuple[int, int, float], ...] = ()
    unmatched_gt: tuple[int, ...] = ()
    unmatched_pred: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(g), int(p), float(m)) for g, p, m in self.pairs))
        object.__setattr__(self, "unmatched_gt", tuple(int(g) for g in self.unmatched_gt))
        object.__setattr__(self, "unmatched_pred", tuple(int(p) for p in self.unmatched_pred))
        gts = [g for g, _, _ in self.pairs]
        preds = [p for _, p, _ in self.pairs]
        if len(set(gts)) != len(gts) or len(set(preds)) != len(preds):
            raise MetricError("an object appears in more than one matched pair")

    def pred_to_gt(self) -> dict[int, int]:
        return {p: g for g, p, _ in self.pairs}

    def gt_to_pred(self) -> dict[int, int]:
        return {g: p for g, p, _ in self.pairs}

    @property
    def mean_score(self) -> float:
        if not self.pairs:
            return 0.0
        return float(np.mean([m for _, _, m in self.pairs]))


def build_tracks(detections_per_frame: Sequence[Sequence[Detection]]) -> dict[int, dict[int, Box2]]:
    """
    Group per-frame detections into tracks keyed by object id.

    Tracks are ordered by first appearance; duplicate ids within a frame keep
    their largest box. Anonymous detections are ignored.
    """
    tracks: dict[int, dict[int, Box2]] = {}
    for t, dets in enumerate(detections_per_frame):
        for det in collapse_duplicates(dets):
            if det.object_id is None:
                continue
            tracks.setdefault(det.object_id, {})[t] = det.box
    return tracks


def pair_match_score(gt_track: Track, pred_track: Track, num_frames: Optional[int] = None) -> MatchScore:
    """Score one gt/predicted object pair; frames at or beyond num_frames are ignored."""
    gt_frames = {t for t in gt_track if num_frames is None or t < num_frames}
    pred_frames = {t for t in pred_track if num_frames is None or t < num_frames}
    both = gt_frames & pred_frames
    u = len(gt_frames) + len(pred_frames) - len(both)
    if u == 0:
        raise MetricError("empty objects: neither object appears in any frame")
    c = float(sum(giou(gt_track[t], pred_track[t]) for t in sorted(both)))
    return MatchScore(c=c, u=u, m=c / u)


def solve_assignment(cost: np.ndarray | Sequence[Sequence[float]]) -> Assignment:
    """
    Minimal-cost one-to-one assignment covering min(rows, cols) pairs.

    Rectangular inputs are padded to a square with a constant strictly larger
    than every real entry; pairs landing on padding are dropped.
    """
    matrix = np.asarray(cost, dtype=np.float64)
    if matrix.size == 0:
        return Assignment((), (), 0.0)
    if matrix.ndim != 2:
        raise ValueError(f"cost matrix must be 2-dimensional, got shape {matrix.shape}")
    if not np.isfinite(matrix).all():
        raise ValueError("cost matrix must be finite")

    n_rows, n_cols = matrix.shape
    size = max(n_rows, n_cols)
    if n_rows != n_cols:
        pad_value = float(matrix.max()) + 1.0
        padded = np.full((size, size), pad_value)
        padded[:n_rows, :n_cols] = matrix
    else:
        padded = matrix

    rows, cols = linear_sum_assignment(padded)
    keep = (rows < n_rows) & (cols < n_cols)
    rows, cols = rows[keep], cols[keep]
    total = float(matrix[rows, cols].sum())
    return Assignment(tuple(int(r) for r in rows), tuple(int(c) for c in cols), total)


def score_matrix(
    gt_tracks: Mapping[int, Track], pred_tracks: Mapping[int, Track], num_frames: Optional[int] = None
) -> np.ndarray:
    """Matrix of m scores, rows in gt order and columns in predicted order."""
    gt_ids = list(gt_tracks)
    pred_ids = list(pred_tracks)
    scores = np.zeros((len(gt_ids), len(pred_ids)))
    for r, g in enumerate(gt_ids):
        for c, p in enumerate(pred_ids):
            scores[r, c] = pair_match_score(gt_tracks[g], pred_tracks[p], num_frames).m
    return scores


def match_tracks(
    gt_tracks: Mapping[int, Track], pred_tracks: Mapping[int, Track], num_frames: Optional[int] = None
) -> ObjectMatching:
    """Hungarian matching on 1 - m; assigned pairs with m <= 0 count as unmatched."""
    gt_ids = list(gt_tracks)
    pred_ids = list(pred_tracks)
    scores = score_matrix(gt_tracks, pred_tracks, num_frames)
    assignment = solve_assignment(1.0 - scores)

    pairs = []
    matched_gt: set[int] = set()
    matched_pred: set[int] = set()
    for r, c in assignment.pairs():
        m = float(scores[r, c])
        if m <= 0:
            continue
        pairs.append((gt_ids[r], pred_ids[c], m))
        matched_gt.add(gt_ids[r])
        matched_pred.add(pred_ids[c])

    return ObjectMatching(
        pairs=tuple(sorted(pairs)),
        unmatched_gt=tuple(g for g in gt_ids if g not in matched_gt),
        unmatched_pred=tuple(p for p in pred_ids if p not in matched_pred),
    )


def match_objects(gt_scene: SceneAnnotation, pred_dets: Sequence[Sequence[Detection]]) -> ObjectMatching:
    """Match the scene's gt objects to predicted object ids through their box tracks."""
    if len(pred_dets) != gt_scene.num_frames:
        raise MetricError(
            f"predicted detections cover {len(pred_dets)} frames, scene {gt_scene.scene_id} has {gt_scene.num_frames}"
        )
    gt_per_frame = gt_scene.detections_per_frame()
    for t, dets in enumerate(gt_per_frame):
        if any(d.object_id is None for d in dets):
            raise SceneError(f"anonymous gt detection in frame {t}")

    gt_tracks = build_tracks(gt_per_frame)
    pred_tracks = build_tracks(pred_dets)
    matching = match_tracks(gt_tracks, pred_tracks, gt_scene.num_frames)
    logger.debug(
        f"Matched {len(matching.pairs)} objects in {gt_scene.scene_id} "
        f"({len(matching.unmatched_gt)} gt, {len(matching.unmatched_pred)} predicted unmatched)"
    )
    return matching
