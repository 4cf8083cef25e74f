"""Online object association against a memory bank."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from msgkit.association.bank import MemoryBank
from msgkit.association.models import AssocConfig, EmbeddingSet
from msgkit.metrics import solve_assignment

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AssociationResult:
    """Predicted object id of every detection, per frame, and the final bank."""

    object_ids: tuple[tuple[int, ...], ...]
    bank: MemoryBank


def associate_frame(bank: MemoryBank, embeddings: np.ndarray, tau_object: float) -> list[int]:
    """
    Assign one frame's detections to bank objects or register new ones.

    Detections and prototypes are paired by a maximum-similarity one-to-one
    assignment; a pair is accepted only if its cosine reaches tau_object.
    """
    n = embeddings.shape[0]
    ids: list[int | None] = [None] * n
    if n == 0:
        return []

    if len(bank):
        sim = bank.similarity(embeddings)
        assignment = solve_assignment(-sim)
        accepted = [(r, c) for r, c in assignment.pairs() if sim[r, c] >= tau_object]
        for r, c in accepted:
            ids[r] = bank.update(c, embeddings[r])

    # New objects register after matching so they cannot absorb detections of the same frame
    for r in range(n):
        if ids[r] is None:
            ids[r] = bank.register(embeddings[r])
    return [int(i) for i in ids]  # type: ignore[arg-type]


def associate_objects(emb: EmbeddingSet, cfg: AssocConfig) -> AssociationResult:
    """Process frames in stored order, growing and refining one memory bank."""
    bank = MemoryBank(emb.dim, cfg.bank_update)
    per_frame: list[tuple[int, ...]] = []
    for embeddings in emb.objects:
        per_frame.append(tuple(associate_frame(bank, embeddings, cfg.tau_object)))
    total = sum(len(ids) for ids in per_frame)
    logger.debug(f"Associated {total} detections into {len(bank)} objects")
    return AssociationResult(object_ids=tuple(per_frame), bank=bank)
