"""Data models for the training-signal numerics and the linear probe."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from msgkit.association import EmbeddingSet
from msgkit.errors import ConfigError
from msgkit.graph import MSGraph


@dataclass(frozen=True, eq=False)
class LossResult:
    """Scalar loss and its gradient with respect to each input."""

    loss: float
    grads: tuple[np.ndarray, ...] = ()


@dataclass(frozen=True)
class ProbeConfig:
    """Linear-probe hyperparameters and the loss weighting between place and object pairs."""

    in_dim: int
    out_dim: int
    learning_rate: float = 2e-5
    weight_decay: float = 0.01
    epochs: int = 30
    scenes_per_batch: int = 6
    frames_per_scene: int = 64
    positive_weight: float = 10.0
    bce_scale: float = 10.0
    place_loss_weight: float = 1.0
    object_loss_weight: float = 1.0
    max_pairs_per_step: int = 4096
    coding_rate_eps: float = 0.5
    seed: int = 0

    def __post_init__(self):
        for name in ("in_dim", "out_dim", "scenes_per_batch", "frames_per_scene", "max_pairs_per_step"):
            if getattr(self, name) <= 0:
                raise ConfigError(name, f"must be > 0, got {getattr(self, name)}")
        for name in ("learning_rate", "positive_weight", "bce_scale", "coding_rate_eps"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ConfigError(name, f"must be > 0, got {value}")
        for name in ("weight_decay", "place_loss_weight", "object_loss_weight"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ConfigError(name, f"must be >= 0, got {value}")
        if self.epochs < 0:
            raise ConfigError("epochs", f"must be >= 0, got {self.epochs}")

    @classmethod
    def from_dict(cls, data: dict) -> "ProbeConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown probe setting")
        return cls(**data)

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


@dataclass(eq=False)
class Projector:
    """Affine map z = W x + b applied row-wise to embeddings."""

    weights: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64).reshape(-1)
        if self.weights.ndim != 2 or self.bias.shape != (self.weights.shape[0],):
            raise ValueError(f"projector shapes do not agree: W {self.weights.shape}, b {self.bias.shape}")
        if not (np.isfinite(self.weights).all() and np.isfinite(self.bias).all()):
            raise ValueError("projector entries must be finite")

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]

    @classmethod
    def init(cls, in_dim: int, out_dim: int, seed: int = 0, noise: float = 0.01) -> "Projector":
        """Truncated or zero-padded identity plus seeded Gaussian noise; zero bias."""
        rng = np.random.default_rng(seed)
        weights = np.eye(out_dim, in_dim) + noise * rng.standard_normal((out_dim, in_dim))
        return cls(weights, np.zeros(out_dim))

    def project(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape[-1] != self.in_dim:
            raise ValueError(f"expected {self.in_dim}-dim inputs, got {x.shape[-1]}")
        return x @ self.weights.T + self.bias

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.project(x)

    def apply(self, emb: EmbeddingSet) -> EmbeddingSet:
        return emb.map(self.project)

    def equals(self, other: "Projector") -> bool:
        return bool(np.array_equal(self.weights, other.weights) and np.array_equal(self.bias, other.bias))


@dataclass(frozen=True, eq=False)
class TrainingScene:
    """Frozen embeddings of one scene with the labels pairs are drawn from."""

    emb: EmbeddingSet
    gt: MSGraph
    # True object id per detection, per frame; None marks a detection with no gt object
    object_ids: tuple[tuple[Optional[int], ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "object_ids", tuple(tuple(ids) for ids in self.object_ids))
        if self.gt.num_places != self.emb.num_frames:
            raise ValueError(f"gt has {self.gt.num_places} places, embeddings cover {self.emb.num_frames} frames")
        if [len(ids) for ids in self.object_ids] != self.emb.detection_counts():
            raise ValueError("object ids are not aligned with the object embeddings")


@dataclass(frozen=True, eq=False)
class PairBatch:
    """
    Rows and labeled index pairs for one optimization step.

    Pair labels are 1.0 for same place (resp. same object) and 0.0 otherwise.
    """

    place_x: np.ndarray
    place_pairs: np.ndarray
    place_labels: np.ndarray
    object_x: np.ndarray
    object_pairs: np.ndarray
    object_labels: np.ndarray
    scene_indices: tuple[int, ...] = ()


@dataclass(frozen=True)
class EpochStats:
    """Mean training loss and the coding rate of projected place embeddings after one epoch."""

    epoch: int
    loss: float
    coding_rate: float


@dataclass(eq=False)
class ProbeResult:
    """Trained projector and its per-epoch history."""

    projector: Projector
    history: list[EpochStats] = field(default_factory=list)
