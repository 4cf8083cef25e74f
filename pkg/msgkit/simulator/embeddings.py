"""
Planted embeddings with known structure.

Oracle place embeddings are rows of a Cholesky factor of I + beta * A_pp, so
thresholding their cosines at beta / 2 recovers the PP edges exactly. Smooth
place embeddings are random Fourier features of the pose. Object embeddings
are noisy copies of one orthonormal latent per object, optionally pulled
together by a shared offset that a linear map can remove.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import cholesky

from msgkit.association import normalize_rows
from msgkit.errors import EmbeddingError
from msgkit.graph import MSGraph, to_adjacency
from msgkit.gt import Detection, SceneAnnotation
from msgkit.simulator.config import SimConfig
from msgkit.simulator.scene import DISTORTION, OBJECT_LATENT, OBJECT_NOISE, PLACE, rng_for

logger = logging.getLogger(__name__)

ORACLE_MARGIN = 0.9


@dataclass(frozen=True, eq=False)
class PlantedObjects:
    """Per-frame object embeddings, the latents behind them and whether those are orthonormal."""

    embeddings: tuple[np.ndarray, ...]
    latents: np.ndarray
    latents_orthogonal: bool


def _noise(rng: np.random.Generator, shape: tuple[int, ...], sigma: float) -> np.ndarray:
    """Gaussian noise with expected squared row norm sigma^2."""
    dim = shape[-1]
    return sigma * rng.standard_normal(shape) / math.sqrt(dim)


def plant_place_embeddings_oracle(gt: MSGraph, dim: int) -> tuple[np.ndarray, float]:
    """
    Unit place embeddings whose cosines equal beta on PP edges and 0 elsewhere.

    beta = 0.9 / max(1, max PP degree) keeps I + beta * A strictly diagonally
    dominant; returns the embeddings and the reconstruction threshold beta / 2.
    """
    n = gt.num_places
    if dim < n:
        raise EmbeddingError(f"oracle place embeddings need dim >= {n} places, got {dim}")
    app = to_adjacency(gt).app.astype(np.float64)
    max_degree = int(app.sum(axis=1).max()) if n else 0
    beta = ORACLE_MARGIN / max(1, max_degree)
    gram = np.eye(n) + beta * app
    factor = cholesky(gram, lower=True) if n else np.zeros((0, 0))
    embeddings = np.zeros((n, dim))
    embeddings[:, :n] = factor
    return embeddings, beta / 2.0


def smooth_bandwidths(cfg: SimConfig) -> tuple[float, float]:
    """
    Length scales (position, heading chord) putting the kernel at smooth_target_cos
    for a pose pair exactly at either threshold while the other distance is zero.
    """
    decay = -math.log(cfg.smooth_target_cos)
    trans = max(cfg.thresholds.translation, 1e-3)
    chord = max(2.0 * math.sin(min(cfg.thresholds.rotation, math.pi) / 2.0), 1e-3)
    # exp(-d^2 / (2 l^2)) = target at d = threshold
    return trans / math.sqrt(2.0 * decay), chord / math.sqrt(2.0 * decay)


def plant_place_embeddings_smooth(scene: SceneAnnotation, cfg: SimConfig) -> np.ndarray:
    """Random Fourier features of (position, viewing direction) plus noise, normalized."""
    rng = rng_for(cfg.seed, PLACE)
    length_t, length_r = smooth_bandwidths(cfg)
    dim = cfg.embedding_dim
    positions = np.array([f.pose.center for f in scene.frames]).reshape(-1, 3)
    forwards = np.array([f.pose.matrix[:, 2] for f in scene.frames]).reshape(-1, 3)
    inputs = np.hstack([positions / length_t, forwards / length_r])

    freqs = rng.standard_normal((inputs.shape[1], dim))
    phases = rng.uniform(0.0, 2.0 * math.pi, size=dim)
    features = math.sqrt(2.0 / dim) * np.cos(inputs @ freqs + phases)
    features = features + _noise(rng, features.shape, cfg.sigma_place)
    return normalize_rows(features) if len(features) else features


def distortion_offset(cfg: SimConfig) -> Optional[np.ndarray]:
    """
    Shared offset s * u added to every object embedding, u a unit vector drawn from distortion_seed.

    Distinct objects then sit at cosine about s^2 / (1 + s^2), which is above tau_object
    for s near 1; projecting out u restores them.
    """
    if cfg.object_distortion == 0:
        return None
    rng = rng_for(cfg.distortion_seed, DISTORTION)
    direction = normalize_rows(rng.standard_normal((1, cfg.embedding_dim)))[0]
    return cfg.object_distortion * direction


def object_latents(object_ids: Sequence[int], cfg: SimConfig) -> tuple[np.ndarray, bool]:
    """One unit latent per object; exactly orthonormal when there are no more objects than dims."""
    rng = rng_for(cfg.seed, OBJECT_LATENT)
    n, dim = len(object_ids), cfg.embedding_dim
    gaussian = rng.standard_normal((dim, max(n, 1)))
    if n <= dim:
        q, _ = np.linalg.qr(gaussian)
        return q[:, :n].T.copy(), True
    logger.warning(f"{n} objects exceed embedding dim {dim}: latents are not orthogonal")
    return normalize_rows(gaussian.T), False


def plant_object_embeddings(
    detections: Sequence[Sequence[Detection]], cfg: SimConfig, object_ids: Optional[Sequence[int]] = None
) -> PlantedObjects:
    """
    normalize(latent + sigma_object * noise) per detection, then the optional shared offset.

    Detections without an object id get random unit vectors.
    """
    if object_ids is None:
        object_ids = list(range(cfg.n_objects))
    latents, orthogonal = object_latents(object_ids, cfg)
    row_of = {k: r for r, k in enumerate(object_ids)}
    rng = rng_for(cfg.seed, OBJECT_NOISE)
    offset = distortion_offset(cfg)

    per_frame = []
    for dets in detections:
        rows = np.zeros((len(dets), cfg.embedding_dim))
        for r, det in enumerate(dets):
            if det.object_id is None:
                rows[r] = normalize_rows(rng.standard_normal((1, cfg.embedding_dim)))[0]
            else:
                rows[r] = latents[row_of[det.object_id]]
        rows = rows + _noise(rng, rows.shape, cfg.sigma_object)
        if len(rows):
            rows = normalize_rows(rows)
            if offset is not None:
                rows = normalize_rows(rows + offset)
        per_frame.append(rows)
    return PlantedObjects(tuple(per_frame), latents, orthogonal)


def perturb_places(embeddings: np.ndarray, cfg: SimConfig) -> np.ndarray:
    """Oracle place embeddings plus sigma_place noise, renormalized."""
    if cfg.sigma_place == 0 or not len(embeddings):
        return embeddings
    rng = rng_for(cfg.seed, PLACE)
    return normalize_rows(embeddings + _noise(rng, embeddings.shape, cfg.sigma_place))
