"""Data models for embedding-based graph prediction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from msgkit.errors import ConfigError, EmbeddingError
from msgkit.graph import MSGraph
from msgkit.gt import Detection

BANK_UPDATE_MODES = ("running_mean", "replace")

COSINE_SNAP = 1e-12


def normalize_rows(x: np.ndarray) -> np.ndarray:
    """Scale every row to unit norm (rows must be nonzero)."""
    x = np.asarray(x, dtype=np.float64)
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def clip_cosine(sim: np.ndarray) -> np.ndarray:
    """Clip cosines to [-1, 1]; values within COSINE_SNAP of +-1 snap to it so duplicates compare equal."""
    sim = np.clip(sim, -1.0, 1.0)
    return np.where(np.abs(sim) >= 1.0 - COSINE_SNAP, np.sign(sim), sim)


@dataclass(frozen=True, eq=False)
class EmbeddingSet:
    """
    Per-frame place embeddings and per-detection object embeddings.

    `objects[t]` has one row per detection of frame t, in detection order.
    """

    dim: int
    place: np.ndarray
    objects: tuple[np.ndarray, ...]
    frame_ids: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        place = np.asarray(self.place, dtype=np.float64)
        if place.ndim != 2 or place.shape[1] != self.dim:
            raise EmbeddingError(f"place embeddings must be N x {self.dim}, got shape {place.shape}")
        objects = tuple(np.asarray(o, dtype=np.float64).reshape(-1, self.dim) for o in self.objects)
        if len(objects) != place.shape[0]:
            raise EmbeddingError(f"{place.shape[0]} place embeddings but {len(objects)} object groups")
        frame_ids = self.frame_ids if self.frame_ids is not None else tuple(range(place.shape[0]))
        if len(frame_ids) != place.shape[0]:
            raise EmbeddingError("frame_ids must have one entry per frame")
        for name, block in [("place", place), *((f"objects[{t}]", o) for t, o in enumerate(objects))]:
            if block.size and not np.isfinite(block).all():
                raise EmbeddingError(f"{name} embeddings must be finite")
            if block.size and (np.linalg.norm(block, axis=1) == 0).any():
                raise EmbeddingError(f"{name} holds a zero-norm embedding")
        object.__setattr__(self, "place", place)
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "frame_ids", tuple(int(f) for f in frame_ids))

    @property
    def num_frames(self) -> int:
        return self.place.shape[0]

    def detection_counts(self) -> list[int]:
        return [o.shape[0] for o in self.objects]

    def check_aligned(self, detections_per_frame: Sequence[Sequence[Detection]]) -> None:
        """Raise EmbeddingError unless there is one embedding per frame and per detection."""
        if len(detections_per_frame) != self.num_frames:
            raise EmbeddingError(
                f"embeddings cover {self.num_frames} frames, detections cover {len(detections_per_frame)}"
            )
        for t, (dets, emb) in enumerate(zip(detections_per_frame, self.objects)):
            if len(dets) != emb.shape[0]:
                raise EmbeddingError(f"frame {t}: {len(dets)} detections but {emb.shape[0]} object embeddings")

    def map(self, fn) -> "EmbeddingSet":
        """Apply a row-wise map (e.g. a projector) to every embedding."""
        place = fn(self.place)
        objects = tuple(fn(o) if o.shape[0] else np.zeros((0, place.shape[1])) for o in self.objects)
        return EmbeddingSet(place.shape[1], place, objects, self.frame_ids)


@dataclass(frozen=True)
class AssocConfig:
    """Cosine thresholds and the prototype update rule of the memory bank."""

    tau_place: float = 0.3
    tau_object: float = 0.2
    bank_update: str = "running_mean"

    def __post_init__(self):
        for name in ("tau_place", "tau_object"):
            value = getattr(self, name)
            if not math.isfinite(value) or not -1.0 < value <= 1.0:
                raise ConfigError(name, f"must lie in (-1, 1], got {value}")
        if self.bank_update not in BANK_UPDATE_MODES:
            raise ConfigError("bank_update", f"must be one of {BANK_UPDATE_MODES}, got {self.bank_update!r}")


@dataclass
class BankEntry:
    """One registered object: its id, unit prototype and how often it was seen."""

    object_id: int
    prototype: np.ndarray
    count: int = 1


@dataclass(frozen=True, eq=False)
class PredictionResult:
    """Predicted graph plus the per-frame detections relabeled with predicted ids."""

    graph: MSGraph
    detections: tuple[tuple[Detection, ...], ...]
    similarity: np.ndarray
    object_ids: tuple[tuple[int, ...], ...]
