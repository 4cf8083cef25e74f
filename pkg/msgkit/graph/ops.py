"""Validation and adjacency-matrix views of the place+object graph."""

from __future__ import annotations

import logging
from typing import Iterable, Optional, Sequence

import numpy as np

from msgkit.errors import GraphValidationError
from msgkit.graph.models import AdjacencyBlocks, GraphStats, MSGraph, ObjectId, ObjectNode

logger = logging.getLogger(__name__)


def validate(graph: MSGraph) -> list[str]:
    """
    Check every graph invariant.

    Returns an empty list iff the graph is valid; otherwise one message per
    offending node or edge.
    """
    violations: list[str] = []
    if graph.num_places < 0:
        violations.append(f"negative place count {graph.num_places}")

    seen: set[ObjectId] = set()
    for node in graph.objects:
        if node.id < 0:
            violations.append(f"negative object id {node.id}")
        if node.id in seen:
            violations.append(f"duplicate object id {node.id}")
        seen.add(node.id)

    for i, j in sorted(graph.pp_edges):
        if i == j:
            violations.append(f"self-edge on place {i}")
        for p in (i, j):
            if not 0 <= p < graph.num_places:
                violations.append(f"pp edge ({i}, {j}) references unknown place {p}")

    for i, k in sorted(graph.po_edges):
        if not 0 <= i < graph.num_places:
            violations.append(f"po edge ({i}, {k}) references unknown place {i}")
        if k not in seen:
            violations.append(f"po edge ({i}, {k}) references unknown object {k}")

    return violations


def make_graph(
    num_places: int,
    objects: Iterable[ObjectNode] = (),
    pp_edges: Iterable[tuple[int, int]] = (),
    po_edges: Iterable[tuple[int, int]] = (),
) -> MSGraph:
    """Build a graph and raise GraphValidationError if it violates an invariant."""
    graph = MSGraph(num_places, tuple(objects), frozenset(pp_edges), frozenset(po_edges))
    violations = validate(graph)
    if violations:
        raise GraphValidationError(violations)
    return graph


def to_adjacency(graph: MSGraph) -> AdjacencyBlocks:
    """Return the PP and PO blocks; the object ordinal defines the PO column."""
    violations = validate(graph)
    if violations:
        raise GraphValidationError(violations)

    n = graph.num_places
    app = np.zeros((n, n), dtype=np.uint8)
    for i, j in graph.pp_edges:
        app[i, j] = 1
        app[j, i] = 1

    apo = np.zeros((n, graph.num_objects), dtype=np.uint8)
    index = graph.object_index
    for i, k in graph.po_edges:
        apo[i, index[k]] = 1

    return AdjacencyBlocks(app=app, apo=apo)


def from_adjacency(
    blocks: AdjacencyBlocks,
    labels: Optional[Sequence[Optional[str]]] = None,
    object_ids: Optional[Sequence[ObjectId]] = None,
) -> MSGraph:
    """
    Rebuild a graph from its adjacency blocks.

    Objects are named by ordinal unless explicit ids are given.
    """
    app, apo = blocks.app, blocks.apo
    if app.ndim != 2 or app.shape[0] != app.shape[1]:
        raise GraphValidationError(f"pp block must be square, got shape {app.shape}")
    n = app.shape[0]
    if apo.ndim != 2 or apo.shape[0] != n:
        raise GraphValidationError(f"po block must have {n} rows, got shape {apo.shape}")
    for name, block in (("pp", app), ("po", apo)):
        if block.size and not np.isin(block, (0, 1)).all():
            raise GraphValidationError(f"{name} block entries must be 0 or 1")
    diag = np.flatnonzero(np.diagonal(app))
    if diag.size:
        raise GraphValidationError([f"self-edge on place {int(i)}" for i in diag])
    if not np.array_equal(app, app.T):
        rows, cols = np.nonzero(app != app.T)
        pairs = sorted({(int(min(i, j)), int(max(i, j))) for i, j in zip(rows, cols)})
        raise GraphValidationError([f"asymmetric pp entry ({i}, {j})" for i, j in pairs])

    m = apo.shape[1]
    ids = list(object_ids) if object_ids is not None else list(range(m))
    names = list(labels) if labels is not None else [None] * m
    if len(ids) != m or len(names) != m:
        raise GraphValidationError(f"expected {m} object ids/labels, got {len(ids)}/{len(names)}")

    rows, cols = np.nonzero(np.triu(app, k=1))
    pp = [(int(i), int(j)) for i, j in zip(rows, cols)]
    rows, cols = np.nonzero(apo)
    po = [(int(i), ids[int(k)]) for i, k in zip(rows, cols)]
    objects = [ObjectNode(ids[k], names[k]) for k in range(m)]
    return make_graph(n, objects, pp, po)


def graph_stats(graph: MSGraph) -> GraphStats:
    """Summary counts of a graph (printed by the GT builder command)."""
    degree = np.zeros(graph.num_places, dtype=np.int64)
    for i, j in graph.pp_edges:
        degree[i] += 1
        degree[j] += 1
    return GraphStats(
        num_places=graph.num_places,
        num_objects=graph.num_objects,
        num_pp_edges=len(graph.pp_edges),
        num_po_edges=len(graph.po_edges),
        mean_pp_degree=float(degree.mean()) if graph.num_places else 0.0,
        isolated_places=int(np.sum(degree == 0)),
    )
