"""
Command implementations.

Each command takes the parsed arguments, writes its outputs plus a run
manifest, prints a short summary on stdout and returns the exit code.
"""

from __future__ import annotations

import asyncio
import json
import logging
import shutil
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np

from msgkit.association import AssocConfig, build_pred_graph, place_similarity
from msgkit.embedlab import ProbeConfig, fit_probe
from msgkit.errors import ConfigError
from msgkit.graph import graph_stats
from msgkit.gt import GtThresholds, build_gt_graph, derive_detections
from msgkit.io import (
    RunManifest,
    load_detections,
    load_embeddings,
    load_graph,
    load_projector,
    load_report,
    load_scene,
    manifest_path_for,
    read_json,
    save_detections,
    save_dot,
    save_embeddings,
    save_graph,
    save_projector,
    save_report,
    save_scene,
    write_json_atomic,
    write_manifest,
)
from msgkit.io.report_file import report_to_dict
from msgkit.metrics import EvalReport, aggregate_reports, evaluate, reports_frame
from msgkit.settings import Settings
from msgkit.simulator import SimConfig, SimScene, evaluate_scene, simulate, simulate_batch

logger = logging.getLogger(__name__)

SCENE_FILE = "scene.json"
DETECTOR_FILE = "detector.json"
EMB_FILE = "emb.msge"
GT_GRAPH_FILE = "gt.graph.json"
PRED_GRAPH_FILE = "pred.graph.json"
PRED_DETS_FILE = "pred_dets.json"
REPORT_FILE = "report.json"

# Scenes used by `probe eval` start at this index so they differ from training scenes
EVAL_SCENE_OFFSET = 1000


def load_settings(args) -> Settings:
    """DEFAULTS < environment < --settings file < flags."""
    settings = Settings.from_file(getattr(args, "settings", None))
    overrides = {
        "gt_translation_threshold": getattr(args, "trans_thresh", None),
        "gt_rotation_threshold": getattr(args, "rot_thresh", None),
        "tau_place": getattr(args, "tau_place", None),
        "tau_object": getattr(args, "tau_object", None),
        "bank_update": getattr(args, "bank_update", None),
        "num_workers": getattr(args, "workers", None),
        "epochs": getattr(args, "epochs", None),
        "learning_rate": getattr(args, "lr", None),
        "seed": getattr(args, "seed", None),
    }
    settings.apply_overrides(overrides)
    return settings


def assoc_config(settings: Settings) -> AssocConfig:
    return AssocConfig(settings.get("tau_place"), settings.get("tau_object"), settings.get("bank_update"))


def _finish(command: str, started: float, out: Path, **fields: Any) -> None:
    manifest = RunManifest(command=command, wall_time_s=round(time.monotonic() - started, 3), **fields)
    write_manifest(manifest_path_for(out), manifest)


def _format_table(reports: list[EvalReport], with_mean: bool) -> str:
    frame = reports_frame(reports, with_mean=with_mean)
    columns = ["recall_at_1", "pp_iou", "po_iou", "graph_iou"]
    return frame[columns].to_string(float_format=lambda v: f"{v:.2f}", na_rep="n/a")


def load_sim_config(path: Optional[str], seed: Optional[int] = None) -> SimConfig:
    data = read_json(path) if path else {}
    if not isinstance(data, dict):
        raise ConfigError("config", "simulator config must be a JSON object")
    if seed is not None:
        data = {**data, "seed": seed}
    return SimConfig.from_dict(data)


# --- simulate ---------------------------------------------------------------


def _write_sim(sim: SimScene, out: Path) -> dict[str, str]:
    outputs = {
        "scene": str(save_scene(out / SCENE_FILE, sim.scene)),
        "detector": str(save_scene(out / DETECTOR_FILE, sim.detector_scene())),
        "embeddings": str(save_embeddings(out / EMB_FILE, sim.emb)),
        "gt_graph": str(save_graph(out / GT_GRAPH_FILE, sim.gt)),
    }
    if sim.oracle_tau_place is not None:
        write_json_atomic(out / "oracle.json", {"tau_place": sim.oracle_tau_place})
        outputs["oracle"] = str(out / "oracle.json")
    return outputs


def cmd_simulate(args) -> int:
    started = time.monotonic()
    cfg = load_sim_config(args.config, args.seed)
    out = Path(args.out)
    if out.exists():
        if not args.force:
            raise FileExistsError(f"output directory {out} exists (use --force to overwrite)")
        shutil.rmtree(out)
    out.mkdir(parents=True)

    sims = [simulate(cfg)] if args.count == 1 else simulate_batch(cfg, args.count)
    outputs: dict[str, str] = {}
    for sim in sims:
        target = out if args.count == 1 else out / sim.scene.scene_id
        target.mkdir(exist_ok=True)
        for key, path in _write_sim(sim, target).items():
            outputs[f"{sim.scene.scene_id}.{key}" if args.count > 1 else key] = path
        stats = graph_stats(sim.gt)
        print(
            f"{sim.scene.scene_id}: {stats.num_places} places, {stats.num_objects} objects, "
            f"{stats.num_pp_edges} pp edges, {stats.num_po_edges} po edges"
        )

    _finish(
        "simulate",
        started,
        out,
        config=cfg.to_dict(),
        inputs={"config": str(args.config)},
        outputs=outputs,
        seed=cfg.seed,
    )
    return 0


# --- build-gt ---------------------------------------------------------------


def cmd_build_gt(args) -> int:
    started = time.monotonic()
    settings = load_settings(args)
    th = GtThresholds(settings.get("gt_translation_threshold"), settings.get("gt_rotation_threshold"))
    scene = load_scene(args.scene)
    config: dict[str, Any] = {"translation": th.translation, "rotation": th.rotation}
    if getattr(args, "derive_detections", False):
        projection = {k: settings.get(k) for k in ("min_box_area", "near_plane", "min_visible_corners")}
        scene = derive_detections(
            scene, projection["min_box_area"], projection["near_plane"], projection["min_visible_corners"]
        )
        config["projection"] = projection
    graph = build_gt_graph(scene, th)
    out = save_graph(args.out, graph)

    stats = graph_stats(graph)
    print(f"places:          {stats.num_places}")
    print(f"objects:         {stats.num_objects}")
    print(f"pp edges:        {stats.num_pp_edges}")
    print(f"po edges:        {stats.num_po_edges}")
    print(f"mean pp degree:  {stats.mean_pp_degree:.3f}")
    print(f"isolated places: {stats.isolated_places}")

    _finish(
        "build-gt",
        started,
        out,
        config=config,
        inputs={"scene": str(args.scene)},
        outputs={"graph": str(out)},
    )
    return 0


# --- associate --------------------------------------------------------------


def cmd_associate(args) -> int:
    started = time.monotonic()
    settings = load_settings(args)
    cfg = assoc_config(settings)
    scene = load_scene(args.scene)
    emb = load_embeddings(args.emb)
    if args.projector:
        emb = load_projector(args.projector).apply(emb)

    result = build_pred_graph(emb, cfg, scene.detections_per_frame())
    graph_out = save_graph(args.out_graph, result.graph)
    dets_out = save_detections(args.out_dets, scene.scene_id, result.detections)
    print(
        f"{scene.scene_id}: {result.graph.num_objects} objects, "
        f"{len(result.graph.pp_edges)} pp edges, {len(result.graph.po_edges)} po edges"
    )

    _finish(
        "associate",
        started,
        graph_out,
        config={"tau_place": cfg.tau_place, "tau_object": cfg.tau_object, "bank_update": cfg.bank_update},
        inputs={"scene": str(args.scene), "embeddings": str(args.emb), "projector": str(args.projector)},
        outputs={"graph": str(graph_out), "detections": str(dets_out)},
    )
    return 0


# --- evaluate ---------------------------------------------------------------


@dataclass(frozen=True)
class EvalInputs:
    """Paths of one scene's evaluation inputs."""

    gt: Path
    pred: Path
    scene: Path
    pred_dets: Path
    emb: Optional[Path] = None

    @classmethod
    def from_dir(cls, directory: Path) -> "EvalInputs":
        emb = directory / EMB_FILE
        return cls(
            gt=directory / GT_GRAPH_FILE,
            pred=directory / PRED_GRAPH_FILE,
            scene=directory / SCENE_FILE,
            pred_dets=directory / PRED_DETS_FILE,
            emb=emb if emb.exists() else None,
        )


def evaluate_inputs(inputs: EvalInputs) -> EvalReport:
    gt = load_graph(inputs.gt)
    pred = load_graph(inputs.pred)
    scene = load_scene(inputs.scene)
    pred_dets = load_detections(inputs.pred_dets)
    similarity: Optional[np.ndarray] = None
    if inputs.emb is not None and gt.pp_edges:
        similarity = place_similarity(load_embeddings(inputs.emb))
    elif inputs.emb is not None:
        logger.warning(f"{inputs.gt} has no PP edges; Recall@1 is not reported")
    return evaluate(gt, pred, scene, pred_dets, similarity)


async def evaluate_directory(root: Path, num_workers: int) -> list[EvalReport]:
    """Evaluate every scene subdirectory in worker threads; results come back sorted by scene id."""
    scene_dirs = sorted(p for p in root.iterdir() if p.is_dir() and (p / GT_GRAPH_FILE).exists())
    if not scene_dirs:
        raise ConfigError("dir", f"no scene directories with {GT_GRAPH_FILE} under {root}")
    semaphore = asyncio.Semaphore(max(1, num_workers))

    async def run(directory: Path) -> EvalReport:
        async with semaphore:
            logger.debug(f"Evaluating {directory.name}")
            return await asyncio.to_thread(evaluate_inputs, EvalInputs.from_dir(directory))

    reports = await asyncio.gather(*(run(d) for d in scene_dirs))
    return sorted(reports, key=lambda r: r.scene_id or "")


def cmd_evaluate(args) -> int:
    started = time.monotonic()
    settings = load_settings(args)
    out = Path(args.out)

    if args.dir:
        reports = asyncio.run(evaluate_directory(Path(args.dir), settings.get("num_workers")))
        mean = aggregate_reports(reports)
        write_json_atomic(out, {"scenes": [report_to_dict(r) for r in reports], "mean": report_to_dict(mean)})
        print(_format_table(reports, with_mean=True))
        inputs = {"dir": str(args.dir)}
    else:
        missing = [flag for flag in ("gt", "pred", "scene", "pred_dets") if not getattr(args, flag)]
        if missing:
            raise ConfigError(missing[0], "required unless --dir is given")
        paths = EvalInputs(
            Path(args.gt), Path(args.pred), Path(args.scene), Path(args.pred_dets), Path(args.emb) if args.emb else None
        )
        report = evaluate_inputs(paths)
        save_report(out, report)
        print(_format_table([report], with_mean=False))
        matching = report.matching
        print(f"matched objects: {len(matching.pairs)} (mean match score {matching.mean_score:.3f})")
        inputs = {k: str(v) for k, v in vars(paths).items() if v is not None}

    _finish(
        "evaluate",
        started,
        out,
        config={"num_workers": settings.get("num_workers")},
        inputs=inputs,
        outputs={"report": str(out)},
    )
    return 0


# --- export-dot -------------------------------------------------------------


def cmd_export_dot(args) -> int:
    started = time.monotonic()
    graph = load_graph(args.graph)
    matching = load_report(args.match).matching if args.match else None
    out = save_dot(args.out, graph, matching, args.side)
    nodes = graph.num_places + graph.num_objects
    edges = len(graph.pp_edges) + len(graph.po_edges)
    print(f"wrote {out}: {nodes} nodes, {edges} edges")
    _finish(
        "export-dot",
        started,
        out,
        config={"side": args.side},
        inputs={"graph": str(args.graph), "match": str(args.match)},
        outputs={"dot": str(out)},
    )
    return 0


# --- probe ------------------------------------------------------------------


def probe_config(settings: Settings, in_dim: int, out_dim: Optional[int]) -> ProbeConfig:
    keys = (
        "learning_rate",
        "weight_decay",
        "epochs",
        "scenes_per_batch",
        "frames_per_scene",
        "positive_weight",
        "bce_scale",
        "place_loss_weight",
        "object_loss_weight",
        "max_pairs_per_step",
        "coding_rate_eps",
        "seed",
    )
    return ProbeConfig(in_dim=in_dim, out_dim=out_dim or in_dim, **{k: settings.get(k) for k in keys})


def cmd_probe_train(args) -> int:
    started = time.monotonic()
    settings = load_settings(args)
    sim_cfg = load_sim_config(args.config)
    cfg = probe_config(settings, sim_cfg.embedding_dim, args.out_dim)
    if args.scenes < 2:
        raise ConfigError("scenes", f"probe training needs at least 2 scenes, got {args.scenes}")

    scenes = [s.training_scene() for s in simulate_batch(sim_cfg, args.scenes)]
    result = fit_probe(scenes, cfg)
    out = save_projector(args.out, result.projector)
    for stats in result.history:
        print(f"epoch {stats.epoch:4d}  loss {stats.loss:.6f}  coding rate {stats.coding_rate:.4f}")

    _finish(
        "probe train",
        started,
        out,
        config={"probe": cfg.to_dict(), "simulator": sim_cfg.to_dict(), "scenes": args.scenes},
        inputs={"config": str(args.config)},
        outputs={"projector": str(out)},
        seed=cfg.seed,
    )
    return 0


def cmd_probe_eval(args) -> int:
    started = time.monotonic()
    settings = load_settings(args)
    sim_cfg = load_sim_config(args.config)
    projector = load_projector(args.projector)
    assoc = assoc_config(settings)

    raw, probed = [], []
    for index in range(args.scenes):
        sim = simulate(sim_cfg.for_scene(EVAL_SCENE_OFFSET + index))
        raw.append(evaluate_scene(sim, assoc))
        probed.append(evaluate_scene(sim, assoc, projector))
    raw_mean, probed_mean = aggregate_reports(raw), aggregate_reports(probed)

    print(f"{'':10s}{'PP IoU':>10s}{'PO IoU':>10s}")
    print(f"{'raw':10s}{raw_mean.pp_iou:10.2f}{raw_mean.po_iou:10.2f}")
    print(f"{'probed':10s}{probed_mean.pp_iou:10.2f}{probed_mean.po_iou:10.2f}")

    outputs = {}
    if args.out:
        out = write_json_atomic(args.out, {"raw": report_to_dict(raw_mean), "probed": report_to_dict(probed_mean)})
        outputs["report"] = str(out)
        _finish(
            "probe eval",
            started,
            out,
            config={"simulator": sim_cfg.to_dict(), "scenes": args.scenes},
            inputs={"config": str(args.config), "projector": str(args.projector)},
            outputs=outputs,
        )
    return 0


def dump_settings(args) -> int:
    print(json.dumps(load_settings(args).all(), indent=2, sort_keys=True))
    return 0
