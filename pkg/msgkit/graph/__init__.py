"""Place+object graph data model and its adjacency-matrix views."""

from msgkit.graph.models import AdjacencyBlocks, GraphStats, MSGraph, ObjectId, ObjectNode, PlaceId
from msgkit.graph.ops import from_adjacency, graph_stats, make_graph, to_adjacency, validate

__all__ = [
    "AdjacencyBlocks",
    "GraphStats",
    "MSGraph",
    "ObjectId",
    "ObjectNode",
    "PlaceId",
    "from_adjacency",
    "graph_stats",
    "make_graph",
    "to_adjacency",
    "validate",
]
