"""Tests for Recall@K and the evaluation report."""

import math

import numpy as np
import pytest

from msgkit.errors import MetricError
from msgkit.geometry import Box2, Intrinsics, Pose
from msgkit.graph import make_graph, to_adjacency
from msgkit.gt import Detection, Frame, SceneAnnotation, build_gt_graph
from msgkit.metrics import EvalReport, aggregate_reports, evaluate, recall_at_1, recall_at_k, reports_frame
from msgkit.metrics.report import MEAN_ROW

INTR = Intrinsics(fx=100.0, fy=100.0, cx=128.0, cy=96.0)


@pytest.fixture
def scene():
    """Four frames on a line 0.6 m apart, two objects."""
    chair, table = Box2(10, 10, 40, 50), Box2(100, 60, 180, 120)
    dets = [(chair,), (chair, table), (table,), (table,)]
    frames = [
        Frame(i, Pose(translation=(0.6 * i, 0.0, 0.0)), INTR, tuple(Detection(b, 0 if b is chair else 1) for b in d))
        for i, d in enumerate(dets)
    ]
    return SceneAnnotation("line", frames)


class TestRecallAtK:
    """Tests for place-recognition recall."""

    def test_gt_adjacency_as_similarity(self, scene):
        """Using the gt adjacency itself as similarity gives 100."""
        gt = build_gt_graph(scene)
        assert recall_at_1(to_adjacency(gt).app, gt) == 100.0

    def test_adversarial_similarity(self):
        """Ranking a non-neighbor first for every query gives 0."""
        gt = make_graph(4, pp_edges=[(0, 1), (2, 3)])
        sim = np.array([[1, 0, 0.9, 0], [0, 1, 0, 0.9], [0.9, 0, 1, 0], [0, 0.9, 0, 1]])
        assert recall_at_1(sim, gt) == 0.0

    def test_only_queries_with_neighbors_count(self):
        """gt {(0,1)}: query 0 hits, query 1 misses, query 2 is not counted."""
        gt = make_graph(3, pp_edges=[(0, 1)])
        sim = np.array([[1.0, 0.9, 0.1], [0.2, 1.0, 0.8], [0.0, 0.0, 1.0]])
        assert recall_at_1(sim, gt) == 50.0

    def test_ties_go_to_lower_index(self):
        """Equal similarities rank the lower index first."""
        gt = make_graph(3, pp_edges=[(0, 2)])
        sim = np.array([[1.0, 0.5, 0.5], [0.5, 1.0, 0.5], [0.5, 0.5, 1.0]])
        # query 0 picks 1 (miss); query 2 picks 0 (hit)
        assert recall_at_1(sim, gt) == 50.0

    def test_diagonal_ignored(self):
        """A huge self-similarity never counts as a retrieval."""
        gt = make_graph(2, pp_edges=[(0, 1)])
        assert recall_at_1(np.array([[100.0, -1.0], [-1.0, 100.0]]), gt) == 100.0

    def test_invariant_to_monotone_transform(self):
        """Argmax ranks survive any strictly increasing transform."""
        rng = np.random.default_rng(8)
        gt = make_graph(8, pp_edges=[(0, 1), (1, 2), (3, 4), (5, 7), (6, 7)])
        for _ in range(20):
            sim = rng.uniform(-1, 1, size=(8, 8))
            assert recall_at_1(np.exp(3 * sim) + 2, gt) == recall_at_1(sim, gt)

    def test_larger_k(self):
        """Recall@K grows with K and reaches 100 at K = n - 1."""
        gt = make_graph(3, pp_edges=[(0, 1)])
        sim = np.array([[1.0, 0.1, 0.9], [0.2, 1.0, 0.8], [0.0, 0.0, 1.0]])
        assert recall_at_k(sim, gt, k=1) == 0.0
        assert recall_at_k(sim, gt, k=2) == 100.0
        assert recall_at_k(sim, gt, k=10) == 100.0

    def test_no_positives(self):
        """Recall is undefined without any gt place edge."""
        with pytest.raises(MetricError, match="recall undefined"):
            recall_at_1(np.eye(3), make_graph(3))

    def test_shape_mismatch(self):
        """Similarity must be square over the places."""
        with pytest.raises(MetricError):
            recall_at_1(np.eye(2), make_graph(3, pp_edges=[(0, 1)]))

    def test_invalid_k(self):
        """k is at least 1."""
        with pytest.raises(ValueError):
            recall_at_k(np.eye(2), make_graph(2, pp_edges=[(0, 1)]), k=0)


class TestEvaluate:
    """Tests for the per-scene report."""

    def test_self_evaluation(self, scene):
        """Gt against itself scores 100 everywhere."""
        gt = build_gt_graph(scene)
        report = evaluate(gt, gt, scene, scene.detections_per_frame(), to_adjacency(gt).app)
        assert (report.recall_at_1, report.pp_iou, report.po_iou, report.graph_iou) == (100.0, 100.0, 100.0, 100.0)
        assert report.scene_id == "line"
        assert len(report.matching.pairs) == 2

    def test_empty_prediction(self, scene):
        """An empty prediction scores 0 on both IoUs."""
        gt = build_gt_graph(scene)
        report = evaluate(gt, make_graph(4), scene, [()] * 4)
        assert report.pp_iou == 0.0
        assert report.po_iou == 0.0
        assert report.recall_at_1 is None
        assert report.matching.unmatched_gt == (0, 1)

    def test_percentages_validated(self):
        """Report percentages stay within [0, 100]."""
        with pytest.raises(ValueError):
            EvalReport(recall_at_1=None, pp_iou=101.0, po_iou=0.0)


class TestAggregate:
    """Tests for multi-scene aggregation."""

    def test_unweighted_mean(self, scene):
        """Percentages are averaged per scene; counts are summed."""
        gt = build_gt_graph(scene)
        perfect = evaluate(gt, gt, scene, scene.detections_per_frame(), to_adjacency(gt).app, scene_id="a")
        empty = evaluate(gt, make_graph(4), scene, [()] * 4, scene_id="b")
        mean = aggregate_reports([perfect, empty])
        assert mean.pp_iou == 50.0
        assert mean.po_iou == 50.0
        assert mean.recall_at_1 == 100.0
        assert mean.pp.fn == perfect.pp.fn + empty.pp.fn
        assert mean.scene_id == MEAN_ROW

    def test_empty_list(self):
        """Aggregating nothing is an error."""
        with pytest.raises(ValueError):
            aggregate_reports([])

    def test_frame_has_mean_row(self, scene):
        """The summary table lists scenes in order followed by the mean."""
        gt = build_gt_graph(scene)
        reports = [
            evaluate(gt, gt, scene, scene.detections_per_frame(), scene_id="a"),
            evaluate(gt, make_graph(4), scene, [()] * 4, scene_id="b"),
        ]
        frame = reports_frame(reports)
        assert list(frame.index) == ["a", "b", MEAN_ROW]
        assert frame.loc[MEAN_ROW, "po_iou"] == 50.0
        assert math.isnan(frame.loc["a", "recall_at_1"])
