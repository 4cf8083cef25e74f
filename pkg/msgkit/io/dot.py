"""
Graphviz DOT export of a place+object graph.

Places are boxes, objects ellipses; PP edges are solid, PO edges dashed. With
a matching, matched objects are green and unmatched ones red.

    dot -Tpng -O graph.gv
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from msgkit.graph import MSGraph
from msgkit.io.atomic import write_text_atomic
from msgkit.metrics import ObjectMatching

MATCHED_COLOR = "green"
UNMATCHED_COLOR = "red"


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(graph: MSGraph, matching: Optional[ObjectMatching] = None, side: str = "pred") -> str:
    """
    DOT text for a graph; node and edge order is sorted, so equal graphs give equal text.

    `side` says which side of the matching the graph's object ids belong to ("pred" or "gt").
    """
    if side not in ("pred", "gt"):
        raise ValueError(f"side must be 'pred' or 'gt', got {side!r}")
    matched: set[int] = set()
    if matching is not None:
        matched = set(matching.pred_to_gt() if side == "pred" else matching.gt_to_pred())

    lines = ["digraph msg {", "\tgraph [];"]
    for i in range(graph.num_places):
        lines.append(f'\t"p{i}" [label="P{i}", shape=box];')
    for node in sorted(graph.objects, key=lambda o: o.id):
        label = f"O{node.id}" if node.label is None else f"O{node.id}: {node.label}"
        attrs = f"label={_quote(label)}, shape=ellipse"
        if matching is not None:
            attrs += f", color={MATCHED_COLOR if node.id in matched else UNMATCHED_COLOR}"
        lines.append(f'\t"o{node.id}" [{attrs}];')
    for i, j in sorted(graph.pp_edges):
        lines.append(f'\t"p{i}" -> "p{j}" [style=solid, dir=none];')
    for i, k in sorted(graph.po_edges):
        lines.append(f'\t"p{i}" -> "o{k}" [style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def save_dot(path: str | Path, graph: MSGraph, matching: Optional[ObjectMatching] = None, side: str = "pred") -> Path:
    return write_text_atomic(path, export_dot(graph, matching, side))
