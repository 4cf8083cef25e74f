"""Evaluation report file; floats are written with 6 significant digits."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Optional

from msgkit.errors import FormatError
from msgkit.io.atomic import read_json, require, write_json_atomic
from msgkit.metrics import EdgeCounts, EvalReport, ObjectMatching


def sig6(value: Optional[float]) -> Optional[float]:
    if value is None:
        return None
    return float(f"{value:.6g}")


def report_to_dict(report: EvalReport) -> dict[str, Any]:
    return {
        "scene_id": report.scene_id,
        "recall_at_1": sig6(report.recall_at_1),
        "pp_iou": sig6(report.pp_iou),
        "po_iou": sig6(report.po_iou),
        "graph_iou": sig6(report.graph_iou),
        "pp": report.pp.to_dict(),
        "po": report.po.to_dict(),
        "matching": {
            "pairs": [[g, p, sig6(m)] for g, p, m in report.matching.pairs],
            "unmatched_gt": list(report.matching.unmatched_gt),
            "unmatched_pred": list(report.matching.unmatched_pred),
        },
    }


def _counts(data: Any, where: str) -> EdgeCounts:
    return EdgeCounts(int(require(data, "tp", where)), int(require(data, "fp", where)), int(require(data, "fn", where)))


def report_from_dict(data: Any, where: str = "report") -> EvalReport:
    try:
        matching = require(data, "matching", where)
        recall = require(data, "recall_at_1", where)
        return EvalReport(
            recall_at_1=None if recall is None else float(recall),
            pp_iou=float(require(data, "pp_iou", where)),
            po_iou=float(require(data, "po_iou", where)),
            pp=_counts(require(data, "pp", where), f"{where}.pp"),
            po=_counts(require(data, "po", where), f"{where}.po"),
            matching=ObjectMatching(
                pairs=tuple((int(g), int(p), float(m)) for g, p, m in require(matching, "pairs", where)),
                unmatched_gt=tuple(require(matching, "unmatched_gt", where)),
                unmatched_pred=tuple(require(matching, "unmatched_pred", where)),
            ),
            graph_iou=float(data.get("graph_iou", 0.0)),
            scene_id=data.get("scene_id"),
        )
    except (TypeError, ValueError) as e:
        if isinstance(e, FormatError):
            raise
        raise FormatError(f"{where}: malformed report ({e})") from e


def save_report(path: str | Path, report: EvalReport) -> Path:
    return write_json_atomic(path, report_to_dict(report))


def load_report(path: str | Path) -> EvalReport:
    return report_from_dict(read_json(path), str(path))
