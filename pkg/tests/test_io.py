"""Tests for file formats: embeddings, graphs, scenes, reports, projectors, DOT and manifests."""

import json
import struct

import numpy as np
import pytest

from msgkit.association import EmbeddingSet
from msgkit.embedlab import Projector
from msgkit.errors import FormatError, GraphValidationError, SceneError
from msgkit.geometry import Box2
from msgkit.graph import ObjectNode, make_graph
from msgkit.gt import Detection
from msgkit.io import (
    MANIFEST_NAME,
    RunManifest,
    decode_embeddings,
    encode_embeddings,
    export_dot,
    graph_from_dict,
    graph_to_dict,
    load_detections,
    load_embeddings,
    load_graph,
    load_projector,
    load_report,
    load_scene,
    manifest_path_for,
    read_json,
    report_to_dict,
    save_detections,
    save_dot,
    save_embeddings,
    save_graph,
    save_projector,
    save_report,
    save_scene,
    scene_to_dict,
    write_json_atomic,
)
from msgkit.io.manifest import write_manifest
from msgkit.metrics import EdgeCounts, EvalReport, ObjectMatching
from msgkit.simulator import SimConfig, generate_scene


@pytest.fixture
def emb():
    rng = np.random.default_rng(0)
    return EmbeddingSet(
        dim=4,
        place=rng.standard_normal((3, 4)),
        objects=(rng.standard_normal((2, 4)), np.zeros((0, 4)), rng.standard_normal((1, 4))),
        frame_ids=(0, 1, 2),
    )


@pytest.fixture
def graph():
    return make_graph(
        3,
        objects=[ObjectNode(7, "chair"), ObjectNode(2, None)],
        pp_edges=[(1, 2), (0, 1)],
        po_edges=[(0, 7), (2, 2)],
    )


class TestEmbeddingFile:
    """Tests for the binary embedding format."""

    def test_layout(self, emb):
        """Header, then per frame: id, count, place row and detection rows as little-endian f32."""
        data = encode_embeddings(emb)
        assert data[:4] == b"MSGE"
        assert struct.unpack("<III", data[4:16]) == (1, 4, 3)
        assert len(data) == 16 + 3 * 8 + (3 + 3) * 4 * 4
        assert struct.unpack("<II", data[16:24]) == (0, 2)

    def test_decode_keeps_float32_values(self, emb, tmp_path):
        """Loaded values equal the f32 rounding of what was saved."""
        path = save_embeddings(tmp_path / "scene.msge", emb)
        loaded = load_embeddings(path)
        assert loaded.frame_ids == (0, 1, 2)
        assert loaded.detection_counts() == [2, 0, 1]
        assert np.array_equal(loaded.place, emb.place.astype(np.float32).astype(np.float64))

    def test_truncated(self, emb):
        """Every proper prefix is rejected."""
        data = encode_embeddings(emb)
        for cut in (0, 3, 15, 20, len(data) - 1):
            with pytest.raises(FormatError):
                decode_embeddings(data[:cut])

    def test_trailing_bytes(self, emb):
        with pytest.raises(FormatError, match="trailing"):
            decode_embeddings(encode_embeddings(emb) + b"\x00")

    def test_bad_magic(self, emb):
        with pytest.raises(FormatError, match="magic"):
            decode_embeddings(b"MSGX" + encode_embeddings(emb)[4:])

    def test_bad_version(self, emb):
        data = bytearray(encode_embeddings(emb))
        data[4:8] = struct.pack("<I", 2)
        with pytest.raises(FormatError, match="version"):
            decode_embeddings(bytes(data))

    def test_zero_norm_rejected(self):
        """A zero place vector on disk is a format error."""
        data = struct.pack("<4sIII", b"MSGE", 1, 2, 1) + struct.pack("<II", 0, 0) + struct.pack("<2f", 0.0, 0.0)
        with pytest.raises(FormatError):
            decode_embeddings(data)


class TestGraphFile:
    """Tests for graph JSON."""

    def test_sorted_output(self, graph):
        """Edges are written sorted regardless of construction order."""
        data = graph_to_dict(graph)
        assert data["pp_edges"] == [[0, 1], [1, 2]]
        assert data["po_edges"] == [[0, 7], [2, 2]]

    def test_save_load(self, graph, tmp_path):
        assert load_graph(save_graph(tmp_path / "g.json", graph)) == graph

    def test_unordered_pp_edge(self):
        """PP edges on disk must be stored as i < j."""
        with pytest.raises(FormatError, match="i < j"):
            graph_from_dict({"num_places": 2, "objects": [], "pp_edges": [[1, 0]], "po_edges": []})

    def test_invalid_graph(self):
        """A PO edge to an unknown object fails validation."""
        with pytest.raises(GraphValidationError):
            graph_from_dict({"num_places": 2, "objects": [], "pp_edges": [], "po_edges": [[0, 5]]})

    @pytest.mark.parametrize("data", [[], {"num_places": 2}, {"num_places": "x", "objects": [], "pp_edges": []}])
    def test_malformed(self, data):
        with pytest.raises(FormatError):
            graph_from_dict(data)


class TestSceneFiles:
    """Tests for scene and detection JSON."""

    def test_scene_save_load(self, tmp_path):
        scene = generate_scene(SimConfig(seed=3, n_frames=6))
        path = save_scene(tmp_path / "scene.json", scene)
        assert load_scene(path) == scene
        assert json.loads(path.read_text()) == scene_to_dict(scene)

    def test_invalid_scene(self, tmp_path):
        """Duplicate frame ids fail scene validation."""
        data = scene_to_dict(generate_scene(SimConfig(seed=3, n_frames=2)))
        data["frames"][1]["frame_id"] = 0
        write_json_atomic(tmp_path / "scene.json", data)
        with pytest.raises(SceneError):
            load_scene(tmp_path / "scene.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{ not json")
        with pytest.raises(FormatError, match="invalid JSON"):
            read_json(path)

    def test_detections(self, tmp_path):
        """Predicted detections keep ids, anonymous boxes and scores."""
        dets = [(Detection(Box2(0, 0, 10, 10), 3, 0.9), Detection(Box2(5, 5, 20, 20))), ()]
        path = save_detections(tmp_path / "dets.json", "room", dets)
        assert load_detections(path) == dets

    def test_detection_frames_in_order(self, tmp_path):
        write_json_atomic(tmp_path / "dets.json", {"frames": [{"frame_id": 1, "detections": []}]})
        with pytest.raises(FormatError, match="frame_id"):
            load_detections(tmp_path / "dets.json")


class TestReportFile:
    """Tests for report JSON."""

    def test_six_significant_digits(self, tmp_path):
        """Percentages are rounded to 6 significant digits; null recall stays null."""
        report = EvalReport(
            recall_at_1=None,
            pp_iou=100.0 / 3.0,
            po_iou=50.0,
            pp=EdgeCounts(1, 1, 1),
            matching=ObjectMatching(pairs=((0, 4, 2.0 / 3.0),), unmatched_pred=(5,)),
            scene_id="room",
        )
        data = report_to_dict(report)
        assert data["pp_iou"] == 33.3333
        assert data["recall_at_1"] is None
        assert data["matching"]["pairs"] == [[0, 4, 0.666667]]

        loaded = load_report(save_report(tmp_path / "report.json", report))
        assert loaded.recall_at_1 is None
        assert loaded.pp == EdgeCounts(1, 1, 1)
        assert loaded.matching.unmatched_pred == (5,)
        assert loaded.scene_id == "room"

    def test_missing_field(self, tmp_path):
        write_json_atomic(tmp_path / "report.json", {"pp_iou": 1.0})
        with pytest.raises(FormatError):
            load_report(tmp_path / "report.json")


class TestProjectorFile:
    """Tests for projector JSON."""

    def test_full_precision(self, tmp_path):
        projector = Projector.init(5, 3, seed=4, noise=0.3)
        loaded = load_projector(save_projector(tmp_path / "probe.json", projector))
        assert np.array_equal(loaded.weights, projector.weights)
        assert np.array_equal(loaded.bias, projector.bias)

    def test_size_mismatch(self, tmp_path):
        write_json_atomic(tmp_path / "probe.json", {"in_dim": 2, "out_dim": 2, "weights": [1, 0, 0], "bias": [0, 0]})
        with pytest.raises(FormatError, match="sizes"):
            load_projector(tmp_path / "probe.json")


class TestDotExport:
    """Tests for Graphviz export."""

    def test_deterministic(self, graph):
        """Equal graphs built in different orders give identical text."""
        shuffled = make_graph(
            3,
            objects=[ObjectNode(2, None), ObjectNode(7, "chair")],
            pp_edges=[(0, 1), (1, 2)],
            po_edges=[(2, 2), (0, 7)],
        )
        assert export_dot(graph) == export_dot(shuffled)

    def test_shapes_and_styles(self, graph):
        text = export_dot(graph)
        assert text.startswith("digraph msg {")
        assert '"p0" [label="P0", shape=box];' in text
        assert '"o7" [label="O7: chair", shape=ellipse];' in text
        assert '"p0" -> "p1" [style=solid, dir=none];' in text
        assert '"p0" -> "o7" [style=dashed];' in text

    def test_matching_colors(self, graph, tmp_path):
        """Matched objects are green, unmatched red, on either side of the matching."""
        matching = ObjectMatching(pairs=((7, 2, 0.5),), unmatched_gt=(), unmatched_pred=(7,))
        pred_side = save_dot(tmp_path / "g.gv", graph, matching).read_text()
        assert '"o2" [label="O2", shape=ellipse, color=green];' in pred_side
        assert 'color=red' in pred_side.split('"o7"')[1].splitlines()[0]
        gt_side = export_dot(graph, matching, side="gt")
        assert 'color=green' in gt_side.split('"o7"')[1].splitlines()[0]

    def test_invalid_side(self, graph):
        with pytest.raises(ValueError):
            export_dot(graph, side="both")


class TestManifest:
    """Tests for run manifests."""

    def test_path_for_file_and_directory(self, tmp_path):
        assert manifest_path_for(tmp_path) == tmp_path / MANIFEST_NAME
        assert manifest_path_for(tmp_path / "report.json") == tmp_path / "report.manifest.json"

    def test_contents(self, tmp_path):
        manifest = RunManifest(command="evaluate", config={"tau_place": 0.3}, seed=4, wall_time_s=0.5)
        data = read_json(write_manifest(tmp_path / MANIFEST_NAME, manifest))
        assert data["command"] == "evaluate"
        assert data["config"] == {"tau_place": 0.3}
        assert data["version"]
