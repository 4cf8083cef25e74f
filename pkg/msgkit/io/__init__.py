"""File formats: graphs, scenes, detections, embeddings, reports, projectors, DOT and manifests."""

from msgkit.io.atomic import read_json, write_bytes_atomic, write_json_atomic, write_text_atomic
from msgkit.io.dot import export_dot, save_dot
from msgkit.io.embeddings_file import decode_embeddings, encode_embeddings, load_embeddings, save_embeddings
from msgkit.io.graph_file import graph_from_dict, graph_to_dict, load_graph, save_graph
from msgkit.io.manifest import MANIFEST_NAME, RunManifest, manifest_path_for, write_manifest
from msgkit.io.projector_file import load_projector, projector_from_dict, projector_to_dict, save_projector
from msgkit.io.report_file import load_report, report_from_dict, report_to_dict, save_report
from msgkit.io.scene_file import (
    detections_from_dict,
    detections_to_dict,
    load_detections,
    load_scene,
    save_detections,
    save_scene,
    scene_from_dict,
    scene_to_dict,
)

__all__ = [
    "MANIFEST_NAME",
    "RunManifest",
    "decode_embeddings",
    "detections_from_dict",
    "detections_to_dict",
    "encode_embeddings",
    "export_dot",
    "graph_from_dict",
    "graph_to_dict",
    "load_detections",
    "load_embeddings",
    "load_graph",
    "load_projector",
    "load_report",
    "load_scene",
    "manifest_path_for",
    "read_json",
    "report_from_dict",
    "report_to_dict",
    "save_detections",
    "save_dot",
    "save_embeddings",
    "save_graph",
    "save_projector",
    "save_report",
    "save_scene",
    "scene_from_dict",
    "scene_to_dict",
    "write_bytes_atomic",
    "write_json_atomic",
    "write_text_atomic",
]
