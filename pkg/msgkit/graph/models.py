"""Data models for the place+object graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

PlaceId = int
ObjectId = int


@dataclass(frozen=True)
class ObjectNode:
    """One physical object, merged across every view it appears in."""

    id: ObjectId
    label: Optional[str] = None


def _canonical_pp(edges: Iterable[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    return frozenset((min(int(i), int(j)), max(int(i), int(j))) for i, j in edges)


@dataclass(frozen=True)
class MSGraph:
    """
    Place+object graph over the ordered image list of one scene.

    Place ids are 0..num_places-1. PP edges are unordered and stored as (i, j)
    with i < j; PO edges are (place, object_id). Construction only normalizes;
    use `make_graph` (or `validate`) to enforce the invariants.
    """

    num_places: int
    objects: tuple[ObjectNode, ...] = ()
    pp_edges: frozenset[tuple[PlaceId, PlaceId]] = field(default_factory=frozenset)
    po_edges: frozenset[tuple[PlaceId, ObjectId]] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "num_places", int(self.num_places))
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "pp_edges", _canonical_pp(self.pp_edges))
        object.__setattr__(self, "po_edges", frozenset((int(i), int(k)) for i, k in self.po_edges))

    @cached_property
    def object_ids(self) -> tuple[ObjectId, ...]:
        return tuple(o.id for o in self.objects)

    @cached_property
    def object_index(self) -> dict[ObjectId, int]:
        """Map object id -> ordinal (its column in the PO block)."""
        return {o.id: k for k, o in enumerate(self.objects)}

    @property
    def num_objects(self) -> int:
        return len(self.objects)

    def relabel_objects(self, mapping: dict[ObjectId, ObjectId]) -> "MSGraph":
        """Return a copy with object ids renamed; ids absent from mapping are kept."""
        objects = tuple(ObjectNode(mapping.get(o.id, o.id), o.label) for o in self.objects)
        po = frozenset((i, mapping.get(k, k)) for i, k in self.po_edges)
        return MSGraph(self.num_places, objects, self.pp_edges, po)


@dataclass(frozen=True, eq=False)
class AdjacencyBlocks:
    """The PP and PO blocks of the graph adjacency matrix (OO left blank, OP = PO transposed)."""

    app: np.ndarray
    apo: np.ndarray

    def __post_init__(self):
        app = np.asarray(self.app)
        apo = np.asarray(self.apo)
        # Empty blocks loaded from JSON lose their shape
        if app.size == 0 and app.ndim != 2:
            app = app.reshape(0, 0)
        if apo.size == 0 and apo.ndim != 2:
            apo = apo.reshape(app.shape[0] if app.ndim == 2 else 0, 0)
        object.__setattr__(self, "app", app)
        object.__setattr__(self, "apo", apo)

    def equals(self, other: "AdjacencyBlocks") -> bool:
        return (
            self.app.shape == other.app.shape
            and self.apo.shape == other.apo.shape
            and bool(np.array_equal(self.app, other.app))
            and bool(np.array_equal(self.apo, other.apo))
        )


@dataclass(frozen=True)
class GraphStats:
    """Summary counts of a graph."""

    num_places: int
    num_objects: int
    num_pp_edges: int
    num_po_edges: int
    mean_pp_degree: float
    isolated_places: int
