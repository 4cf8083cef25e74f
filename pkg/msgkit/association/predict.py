"""
Graph prediction from embeddings.

Usage:
    result = build_pred_graph(emb, AssocConfig(), scene.detections_per_frame())
    result.graph        # predicted MSGraph
    result.detections   # boxes relabeled with predicted object ids
"""

from __future__ import annotations

import logging
from typing import Optional, Sequence

from msgkit.association.models import AssocConfig, EmbeddingSet, PredictionResult
from msgkit.association.objects import associate_objects
from msgkit.association.places import predict_pp
from msgkit.graph import ObjectNode, make_graph
from msgkit.gt import Detection

logger = logging.getLogger(__name__)


def build_pred_graph(
    emb: EmbeddingSet,
    cfg: Optional[AssocConfig] = None,
    frames: Optional[Sequence[Sequence[Detection]]] = None,
) -> PredictionResult:
    """
    Predict the scene graph: thresholded place edges plus memory-bank objects.

    `frames` holds the detection boxes each object embedding belongs to; a PO
    edge (i, id) exists iff frame i holds an embedding assigned that id. Without
    `frames` the graph comes from the embeddings alone and `detections` is empty
    for every frame.
    """
    cfg = cfg or AssocConfig()
    if frames is not None:
        emb.check_aligned(frames)

    pp_edges, similarity = predict_pp(emb, cfg)
    association = associate_objects(emb, cfg)

    detections: list[tuple[Detection, ...]] = []
    po_edges: set[tuple[int, int]] = set()
    for i, ids in enumerate(association.object_ids):
        dets = frames[i] if frames is not None else ()
        detections.append(tuple(d.with_id(k) for d, k in zip(dets, ids)))
        po_edges.update((i, k) for k in ids)

    objects = [ObjectNode(k) for k in association.bank.ids]
    graph = make_graph(emb.num_frames, objects, pp_edges, po_edges)
    logger.info(
        f"Predicted graph: {graph.num_places} places, {graph.num_objects} objects, "
        f"{len(graph.pp_edges)} pp edges, {len(graph.po_edges)} po edges"
    )
    return PredictionResult(
        graph=graph,
        detections=tuple(detections),
        similarity=similarity,
        object_ids=association.object_ids,
    )
