"""Place-recognition Recall@K against the ground-truth PP edges."""

from __future__ import annotations

import numpy as np

from msgkit.errors import MetricError
from msgkit.graph import MSGraph, to_adjacency


def recall_at_k(similarity: np.ndarray, gt: MSGraph, k: int = 1) -> float:
    """
    Percent of queries whose top-k most similar other images hold a gt neighbor.

    Each row is a query; the diagonal is ignored. Only queries with at least one
    gt PP neighbor are counted. Ties go to the lower image index.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    sim = np.array(similarity, dtype=np.float64)
    n = gt.num_places
    if sim.shape != (n, n):
        raise MetricError(f"similarity must be {n}x{n}, got {sim.shape}")

    positives = to_adjacency(gt).app.astype(bool)
    queries = np.flatnonzero(positives.any(axis=1))
    if queries.size == 0:
        raise MetricError("recall undefined: no query image has a gt neighbor")

    np.fill_diagonal(sim, -np.inf)
    hits = 0
    for q in queries:
        # Stable sort on the negated row keeps lower indices first among ties
        ranked = np.argsort(-sim[q], kind="stable")[: min(k, n - 1)]
        if positives[q, ranked].any():
            hits += 1
    return 100.0 * hits / queries.size


def recall_at_1(similarity: np.ndarray, gt: MSGraph) -> float:
    """Percent of queries whose most similar other image is a gt neighbor."""
    return recall_at_k(similarity, gt, k=1)
