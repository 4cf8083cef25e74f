"""Graph file: {"num_places", "objects": [{"id", "label"}], "pp_edges", "po_edges"}."""

from __future__ import annotations

from pathlib import Path
from typing import Any

from msgkit.errors import FormatError
from msgkit.graph import MSGraph, ObjectNode, make_graph
from msgkit.io.atomic import read_json, require, write_json_atomic


def graph_to_dict(graph: MSGraph) -> dict[str, Any]:
    """Edges sorted so identical graphs serialize identically."""
    return {
        "num_places": graph.num_places,
        "objects": [{"id": o.id, "label": o.label} for o in graph.objects],
        "pp_edges": [list(e) for e in sorted(graph.pp_edges)],
        "po_edges": [list(e) for e in sorted(graph.po_edges)],
    }


def graph_from_dict(data: Any, where: str = "graph") -> MSGraph:
    """Parse and validate; invariant violations raise GraphValidationError."""
    try:
        num_places = int(require(data, "num_places", where))
        objects = [
            ObjectNode(int(require(o, "id", f"{where}.objects")), o.get("label"))
            for o in require(data, "objects", where)
        ]
        pp = [(int(i), int(j)) for i, j in require(data, "pp_edges", where)]
        po = [(int(i), int(k)) for i, k in require(data, "po_edges", where)]
    except (TypeError, ValueError) as e:
        if isinstance(e, FormatError):
            raise
        raise FormatError(f"{where}: malformed graph ({e})") from e
    for i, j in pp:
        if i > j:
            raise FormatError(f"{where}: pp edge [{i}, {j}] is not stored as i < j")
    return make_graph(num_places, objects, pp, po)


def save_graph(path: str | Path, graph: MSGraph) -> Path:
    return write_json_atomic(path, graph_to_dict(graph))


def load_graph(path: str | Path) -> MSGraph:
    return graph_from_dict(read_json(path), str(path))
