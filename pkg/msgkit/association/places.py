"""Place-place prediction by cosine thresholding."""

from __future__ import annotations

import numpy as np

from msgkit.association.models import AssocConfig, EmbeddingSet, clip_cosine, normalize_rows


def place_similarity(emb: EmbeddingSet) -> np.ndarray:
    """Symmetric cosine similarity of the place embeddings, with unit diagonal."""
    unit = normalize_rows(emb.place)
    sim = clip_cosine(unit @ unit.T)
    sim = (sim + sim.T) / 2.0
    np.fill_diagonal(sim, 1.0)
    return sim


def predict_pp(emb: EmbeddingSet, cfg: AssocConfig) -> tuple[frozenset[tuple[int, int]], np.ndarray]:
    """PP edges {i, j} (i < j) whose cosine reaches tau_place, plus the similarity matrix."""
    sim = place_similarity(emb)
    rows, cols = np.nonzero(np.triu(sim >= cfg.tau_place, k=1))
    edges = frozenset((int(i), int(j)) for i, j in zip(rows, cols))
    return edges, sim
