"""Per-scene memory bank of object prototypes."""

from __future__ import annotations

import logging

import numpy as np

from msgkit.association.models import BANK_UPDATE_MODES, BankEntry, clip_cosine, normalize_rows

logger = logging.getLogger(__name__)


class MemoryBank:
    """
    Unit-norm prototypes of the objects registered so far in one scene.

    Single writer: one bank per scene, updated frame by frame.
    """

    def __init__(self, dim: int, update: str = "running_mean"):
        if update not in BANK_UPDATE_MODES:
            raise ValueError(f"unknown bank update mode {update!r}")
        self.dim = dim
        self.update_mode = update
        self.entries: list[BankEntry] = []
        self._next_id = 0

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def ids(self) -> list[int]:
        return [e.object_id for e in self.entries]

    def prototypes(self) -> np.ndarray:
        if not self.entries:
            return np.zeros((0, self.dim))
        return np.stack([e.prototype for e in self.entries])

    def similarity(self, embeddings: np.ndarray) -> np.ndarray:
        """Cosine similarity of each embedding (rows) against each prototype (columns)."""
        return clip_cosine(normalize_rows(embeddings) @ self.prototypes().T)

    def register(self, embedding: np.ndarray) -> int:
        """Add a new object whose prototype is the normalized embedding; returns its id."""
        object_id = self._next_id
        self._next_id += 1
        self.entries.append(BankEntry(object_id, normalize_rows(embedding[None, :])[0], 1))
        return object_id

    def update(self, index: int, embedding: np.ndarray) -> int:
        """Fold an embedding into the prototype at position `index`; returns its id."""
        entry = self.entries[index]
        e = normalize_rows(embedding[None, :])[0]
        if self.update_mode == "replace":
            entry.prototype = e
        else:
            merged = (entry.count * entry.prototype + e) / (entry.count + 1)
            norm = np.linalg.norm(merged)
            # Antipodal merge leaves nothing to normalize; keep the newest view
            entry.prototype = merged / norm if norm > 0 else e
        entry.count += 1
        return entry.object_id
