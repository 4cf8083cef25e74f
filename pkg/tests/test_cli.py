"""Tests for the msgkit command line."""

import json
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path

import pytest

from msgkit.cli import EXIT_INVALID, EXIT_IO, EXIT_OK, main
from msgkit.cli.commands import evaluate_directory
from msgkit.embedlab import Projector
from msgkit.graph import make_graph
from msgkit.io import (
    MANIFEST_NAME,
    load_graph,
    load_projector,
    load_scene,
    read_json,
    save_detections,
    save_graph,
    save_projector,
)
from msgkit.version import VERSION

SMALL = {"seed": 3, "n_frames": 12, "n_objects": 4, "embedding_dim": 16}


@pytest.fixture
def sim_config(tmp_path):
    path = tmp_path / "sim.json"
    path.write_text(json.dumps(SMALL))
    return path


@pytest.fixture
def scene_dir(tmp_path, sim_config):
    out = tmp_path / "s0"
    assert main(["simulate", "--config", str(sim_config), "--out", str(out)]) == EXIT_OK
    return out


def associate(directory, *extra):
    tau = read_json(directory / "oracle.json")["tau_place"]
    return main(
        [
            "associate",
            "--scene",
            str(directory / "detector.json"),
            "--emb",
            str(directory / "emb.msge"),
            "--tau-place",
            str(tau),
            "--out-graph",
            str(directory / "pred.graph.json"),
            "--out-dets",
            str(directory / "pred_dets.json"),
            *extra,
        ]
    )


def evaluate_args(directory, pred="pred.graph.json", pred_dets="pred_dets.json"):
    return [
        "evaluate",
        "--gt",
        str(directory / "gt.graph.json"),
        "--pred",
        str(directory / pred),
        "--scene",
        str(directory / "scene.json"),
        "--pred-dets",
        str(directory / pred_dets),
    ]


class TestSimulateCommand:
    """Tests for `msgkit simulate`."""

    def test_outputs(self, scene_dir):
        for name in ("scene.json", "detector.json", "emb.msge", "gt.graph.json", "oracle.json", MANIFEST_NAME):
            assert (scene_dir / name).exists()
        manifest = read_json(scene_dir / MANIFEST_NAME)
        assert manifest["command"] == "simulate"
        assert manifest["seed"] == 3
        assert manifest["config"]["n_frames"] == 12

    def test_detector_scene_is_anonymous(self, scene_dir):
        """The detector file carries boxes without object ids."""
        scene = load_scene(scene_dir / "detector.json")
        assert all(d.object_id is None for dets in scene.detections_per_frame() for d in dets)

    def test_existing_directory(self, scene_dir, sim_config):
        """An existing output needs --force."""
        args = ["simulate", "--config", str(sim_config), "--out", str(scene_dir)]
        assert main(args) == EXIT_IO
        assert main([*args, "--force"]) == EXIT_OK

    def test_invalid_config(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"n_frames": -1}))
        assert main(["simulate", "--config", str(path), "--out", str(tmp_path / "out")]) == EXIT_INVALID

    def test_count(self, tmp_path, sim_config, capsys):
        """--count writes one subdirectory per scene."""
        out = tmp_path / "batch"
        assert main(["simulate", "--config", str(sim_config), "--out", str(out), "--count", "3"]) == EXIT_OK
        assert sorted(p.name for p in out.iterdir() if p.is_dir()) == ["sim-000", "sim-001", "sim-002"]
        assert capsys.readouterr().out.count("places") == 3


class TestPipelineCommands:
    """Tests for build-gt, associate, evaluate and export-dot."""

    def test_build_gt_matches_simulator(self, scene_dir, capsys):
        out = scene_dir / "rebuilt.graph.json"
        assert main(["build-gt", "--scene", str(scene_dir / "scene.json"), "--out", str(out)]) == EXIT_OK
        assert load_graph(out) == load_graph(scene_dir / "gt.graph.json")
        assert "pp edges:" in capsys.readouterr().out
        assert (scene_dir / "rebuilt.graph.manifest.json").exists()

    def test_noiseless_pipeline_scores_100(self, scene_dir):
        """Oracle embeddings through associate and evaluate give a perfect report."""
        assert associate(scene_dir) == EXIT_OK
        report_path = scene_dir / "report.json"
        args = [*evaluate_args(scene_dir), "--emb", str(scene_dir / "emb.msge"), "--out", str(report_path)]
        assert main(args) == EXIT_OK
        report = read_json(report_path)
        assert report["pp_iou"] == 100.0
        assert report["po_iou"] == 100.0
        assert report["recall_at_1"] == 100.0

    def test_gt_against_itself(self, scene_dir):
        """Without --emb recall is null; gt against itself is a perfect match."""
        scene = load_scene(scene_dir / "scene.json")
        save_detections(scene_dir / "gt_dets.json", scene.scene_id, scene.detections_per_frame())
        report_path = scene_dir / "self.json"
        args = [*evaluate_args(scene_dir, "gt.graph.json", "gt_dets.json"), "--out", str(report_path)]
        assert main(args) == EXIT_OK
        report = read_json(report_path)
        assert report["recall_at_1"] is None
        assert report["pp_iou"] == 100.0
        assert report["po_iou"] == 100.0

    def test_invalid_threshold(self, scene_dir):
        assert associate(scene_dir, "--tau-object", "1.5") == EXIT_INVALID

    def test_missing_input(self, scene_dir):
        args = [*evaluate_args(scene_dir), "--out", str(scene_dir / "r.json")]
        assert main(args) == EXIT_IO

    def test_missing_flags(self, scene_dir):
        """Single-scene mode needs all four inputs."""
        assert main(["evaluate", "--gt", str(scene_dir / "gt.graph.json"), "--out", "r.json"]) == EXIT_INVALID

    def test_build_gt_rejects_anonymous_detections(self, scene_dir):
        """The detector file has no object ids, so it cannot define ground truth."""
        args = ["build-gt", "--scene", str(scene_dir / "detector.json"), "--out", str(scene_dir / "bad.graph.json")]
        assert main(args) == EXIT_INVALID
        assert not (scene_dir / "bad.graph.json").exists()

    def test_build_gt_zero_translation(self, scene_dir):
        """A zero translation threshold only joins co-located frames; the walk never revisits a pose."""
        out = scene_dir / "strict.graph.json"
        args = ["build-gt", "--scene", str(scene_dir / "scene.json"), "--trans-thresh", "0", "--out", str(out)]
        assert main(args) == EXIT_OK
        strict = load_graph(out)
        assert strict.pp_edges == frozenset()
        assert strict.po_edges == load_graph(scene_dir / "gt.graph.json").po_edges

    def test_build_gt_derive_detections(self, scene_dir):
        """Re-projecting objects3d with the default projection settings reproduces the gt graph."""
        out = scene_dir / "derived.graph.json"
        args = ["build-gt", "--scene", str(scene_dir / "scene.json"), "--derive-detections", "--out", str(out)]
        assert main(args) == EXIT_OK
        assert load_graph(out) == load_graph(scene_dir / "gt.graph.json")
        manifest = read_json(scene_dir / "derived.graph.manifest.json")
        assert manifest["config"]["projection"]["min_box_area"] == 100.0

    def test_build_gt_projection_settings(self, scene_dir):
        """A settings file raising min_box_area past every box leaves no PO edges."""
        settings = scene_dir / "projection.json"
        settings.write_text(json.dumps({"min_box_area": 1e9}))
        out = scene_dir / "tiny.graph.json"
        args = ["build-gt", "--scene", str(scene_dir / "scene.json"), "--derive-detections"]
        assert main([*args, "--settings", str(settings), "--out", str(out)]) == EXIT_OK
        assert load_graph(out).po_edges == frozenset()

    def test_associate_truncated_embeddings(self, scene_dir):
        """A cut-short embedding file is a format error."""
        emb = scene_dir / "emb.msge"
        emb.write_bytes(emb.read_bytes()[:-5])
        assert associate(scene_dir) == EXIT_INVALID

    def test_associate_projector_dim_mismatch(self, scene_dir):
        """A projector built for other embedding dims is rejected."""
        projector = scene_dir / "projector.json"
        save_projector(projector, Projector.init(8, 8))
        assert associate(scene_dir, "--projector", str(projector)) == EXIT_INVALID

    def test_associate_embeddings_of_other_scene(self, tmp_path, scene_dir):
        """Embeddings covering a different number of frames do not align with the detections."""
        other = tmp_path / "other.json"
        other.write_text(json.dumps({**SMALL, "n_frames": 5}))
        assert main(["simulate", "--config", str(other), "--out", str(tmp_path / "s1")]) == EXIT_OK
        (scene_dir / "emb.msge").write_bytes((tmp_path / "s1" / "emb.msge").read_bytes())
        assert associate(scene_dir) == EXIT_INVALID

    def test_evaluate_prints_match_summary(self, scene_dir, capsys):
        associate(scene_dir)
        capsys.readouterr()
        assert main([*evaluate_args(scene_dir), "--out", str(scene_dir / "report.json")]) == EXIT_OK
        out = capsys.readouterr().out
        assert "matched objects:" in out
        assert "(mean match score 1.000)" in out

    def test_evaluate_without_place_edges(self, tmp_path):
        """A single-frame scene has no PP edges, so --emb yields a null recall instead of an error."""
        config = tmp_path / "one.json"
        config.write_text(json.dumps({**SMALL, "n_frames": 1}))
        directory = tmp_path / "one"
        assert main(["simulate", "--config", str(config), "--out", str(directory)]) == EXIT_OK
        assert associate(directory) == EXIT_OK
        report_path = directory / "report.json"
        args = [*evaluate_args(directory), "--emb", str(directory / "emb.msge"), "--out", str(report_path)]
        assert main(args) == EXIT_OK
        assert read_json(report_path)["recall_at_1"] is None

    def test_export_dot_is_deterministic(self, scene_dir):
        """Repeated exports of the same graph are byte-identical."""
        outputs = [scene_dir / "a.gv", scene_dir / "b.gv"]
        for out in outputs:
            assert main(["export-dot", "--graph", str(scene_dir / "gt.graph.json"), "--out", str(out)]) == EXIT_OK
        assert outputs[0].read_bytes() == outputs[1].read_bytes()

    def test_export_dot_empty_graph(self, tmp_path):
        graph = save_graph(tmp_path / "empty.graph.json", make_graph(0))
        out = tmp_path / "empty.gv"
        assert main(["export-dot", "--graph", str(graph), "--out", str(out)]) == EXIT_OK
        assert out.read_text() == "digraph msg {\n\tgraph [];\n}\n"

    def test_export_dot_with_matching(self, scene_dir):
        associate(scene_dir)
        report = scene_dir / "report.json"
        main([*evaluate_args(scene_dir), "--out", str(report)])
        out = scene_dir / "pred.gv"
        args = ["export-dot", "--graph", str(scene_dir / "pred.graph.json"), "--out", str(out), "--match", str(report)]
        assert main(args) == EXIT_OK
        text = out.read_text()
        assert text.startswith("digraph msg {")
        assert "color=green" in text
        assert "color=red" not in text


class TestDirectoryEvaluation:
    """Tests for evaluating many scenes at once."""

    @pytest.fixture
    def batch(self, tmp_path, sim_config):
        out = tmp_path / "batch"
        main(["simulate", "--config", str(sim_config), "--out", str(out), "--count", "3"])
        for directory in sorted(p for p in out.iterdir() if p.is_dir()):
            assert associate(directory) == EXIT_OK
        return out

    def test_summary(self, batch, tmp_path, capsys):
        """The summary holds every scene in name order plus a mean row."""
        out = tmp_path / "summary.json"
        assert main(["evaluate", "--dir", str(batch), "--workers", "2", "--out", str(out)]) == EXIT_OK
        summary = read_json(out)
        assert len(summary["scenes"]) == 3
        assert summary["mean"]["po_iou"] == 100.0
        assert "mean" in capsys.readouterr().out

    @pytest.mark.asyncio
    async def test_evaluate_directory(self, batch):
        reports = await evaluate_directory(batch, num_workers=2)
        assert [r.pp_iou for r in reports] == [100.0, 100.0, 100.0]

    @pytest.mark.asyncio
    async def test_reports_sorted_by_scene_id(self, batch):
        """Directory names do not decide the order; scene ids do."""
        for directory, name in zip(sorted(p for p in batch.iterdir() if p.is_dir()), ("z", "y", "x")):
            directory.rename(batch / name)
        reports = await evaluate_directory(batch, num_workers=3)
        assert [r.scene_id for r in reports] == ["sim-000", "sim-001", "sim-002"]

    @pytest.mark.asyncio
    async def test_empty_directory(self, tmp_path):
        with pytest.raises(ValueError, match="no scene directories"):
            await evaluate_directory(tmp_path, num_workers=1)


class TestProbeCommands:
    """Tests for `msgkit probe train` and `msgkit probe eval`."""

    def test_train_then_eval(self, tmp_path, sim_config, capsys):
        projector = tmp_path / "projector.json"
        train = ["probe", "train", "--config", str(sim_config), "--scenes", "2", "--epochs", "2"]
        assert main([*train, "--out", str(projector)]) == EXIT_OK
        assert capsys.readouterr().out.count("epoch") == 2
        assert read_json(projector)["in_dim"] == 16

        report = tmp_path / "probe_eval.json"
        args = ["probe", "eval", "--config", str(sim_config), "--projector", str(projector), "--scenes", "2"]
        assert main([*args, "--out", str(report)]) == EXIT_OK
        assert set(read_json(report)) == {"raw", "probed"}

    def test_train_zero_epochs_writes_initial_projector(self, tmp_path, sim_config, capsys):
        """With --epochs 0 the saved projector is the seeded initialization."""
        projector = tmp_path / "init.json"
        args = ["probe", "train", "--config", str(sim_config), "--scenes", "2", "--epochs", "0"]
        assert main([*args, "--out", str(projector)]) == EXIT_OK
        assert "epoch" not in capsys.readouterr().out
        assert load_projector(projector).equals(Projector.init(16, 16, seed=0))

    def test_train_needs_two_scenes(self, tmp_path, sim_config):
        args = ["probe", "train", "--config", str(sim_config), "--scenes", "1", "--out", str(tmp_path / "p.json")]
        assert main(args) == EXIT_INVALID


class TestSettingsCommand:
    """Tests for `msgkit settings`."""

    def test_dump(self, tmp_path, capsys, monkeypatch):
        monkeypatch.delenv("MSG_NUM_WORKERS", raising=False)
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"tau_object": 0.35}))
        assert main(["settings", "--settings", str(path)]) == EXIT_OK
        dumped = json.loads(capsys.readouterr().out)
        assert dumped["tau_object"] == 0.35
        assert dumped["tau_place"] == 0.3

    def test_unknown_setting(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"colour": "red"}))
        assert main(["settings", "--settings", str(path)]) == EXIT_INVALID


class TestVersion:
    """Tests for `msgkit --version`."""

    def test_version_carries_package_version(self, capsys):
        """The stamped version is the pyproject version plus a UTC build stamp."""
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert capsys.readouterr().out.strip() == VERSION
        project = tomllib.loads((Path(__file__).parents[1] / "pyproject.toml").read_text())["project"]
        assert re.fullmatch(re.escape(project["version"]) + r"\+\d{8}\.\d{4}", VERSION)
