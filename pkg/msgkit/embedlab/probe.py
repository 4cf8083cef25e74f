"""
Linear-probe training over frozen embeddings.

Every step mixes several scenes: a batch holds scenes_per_batch scenes with up
to frames_per_scene frames each. Place pairs are labeled from the gt PP edges,
object pairs from true object ids; pairs spanning two scenes are negatives.

Usage:
    cfg = ProbeConfig(in_dim=64, out_dim=64, learning_rate=1e-2, epochs=50)
    result = fit_probe(training_scenes, cfg)
    probed = result.projector.apply(emb)
"""

from __future__ import annotations

import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import block_diag

from msgkit.embedlab.coding_rate import coding_rate
from msgkit.embedlab.losses import batch_pair_losses
from msgkit.embedlab.models import EpochStats, PairBatch, ProbeConfig, ProbeResult, Projector, TrainingScene
from msgkit.graph import to_adjacency

logger = logging.getLogger(__name__)

ADAM_BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8


def _pairs(n: int, budget: int, rng: np.random.Generator) -> np.ndarray:
    """All index pairs i < j in row-major order, or a sorted random subset of `budget` of them."""
    total = n * (n - 1) // 2
    if total <= budget:
        rows, cols = np.triu_indices(n, k=1)
        return np.stack([rows, cols], axis=1).astype(np.int64)
    linear = np.sort(rng.choice(total, size=budget, replace=False))
    starts = np.arange(n) * n - np.arange(n) * (np.arange(n) + 1) // 2
    rows = np.searchsorted(starts, linear, side="right") - 1
    cols = linear - starts[rows] + rows + 1
    return np.stack([rows, cols], axis=1).astype(np.int64)


def sample_batch(scenes: Sequence[TrainingScene], cfg: ProbeConfig, rng: np.random.Generator) -> PairBatch:
    """Draw one mixed-scene batch and label its pairs, at most max_pairs_per_step per kind."""
    if not scenes:
        raise ValueError("cannot sample a batch from zero scenes")
    count = min(cfg.scenes_per_batch, len(scenes))
    chosen = sorted(int(s) for s in rng.choice(len(scenes), size=count, replace=False))

    place_blocks, object_blocks = [], []
    place_scene, object_scene, object_ids = [], [], []
    same_place_blocks = []
    for s in chosen:
        scene = scenes[s]
        n = scene.emb.num_frames
        frames = np.arange(n)
        if n > cfg.frames_per_scene:
            frames = np.sort(rng.choice(n, size=cfg.frames_per_scene, replace=False))
        place_blocks.append(scene.emb.place[frames])
        place_scene.extend([s] * len(frames))
        same_place_blocks.append(to_adjacency(scene.gt).app.astype(bool)[np.ix_(frames, frames)])
        for t in frames:
            object_blocks.append(scene.emb.objects[t])
            object_scene.extend([s] * len(scene.object_ids[t]))
            object_ids.extend(-1 if k is None else k for k in scene.object_ids[t])

    same_place = block_diag(*same_place_blocks).astype(bool) if same_place_blocks else np.zeros((0, 0), bool)
    place_pairs = _pairs(len(place_scene), cfg.max_pairs_per_step, rng)
    place_labels = same_place[place_pairs[:, 0], place_pairs[:, 1]].astype(np.float64)

    scene_of = np.asarray(object_scene, dtype=np.int64)
    id_of = np.asarray(object_ids, dtype=np.int64)
    object_pairs = _pairs(len(id_of), cfg.max_pairs_per_step, rng)
    a, b = object_pairs[:, 0], object_pairs[:, 1]
    object_labels = ((scene_of[a] == scene_of[b]) & (id_of[a] == id_of[b]) & (id_of[a] >= 0)).astype(np.float64)

    in_dim = scenes[0].emb.dim
    return PairBatch(
        place_x=np.concatenate(place_blocks).reshape(-1, in_dim),
        place_pairs=place_pairs,
        place_labels=place_labels,
        object_x=np.concatenate(object_blocks).reshape(-1, in_dim) if object_blocks else np.zeros((0, in_dim)),
        object_pairs=object_pairs,
        object_labels=object_labels,
        scene_indices=tuple(chosen),
    )


class ProbeTrainer:
    """AdamW steps on a projector; weight decay is decoupled and applied to W only."""

    def __init__(self, projector: Projector, cfg: ProbeConfig):
        self.projector = projector
        self.cfg = cfg
        self.step_count = 0
        self._m = [np.zeros_like(projector.weights), np.zeros_like(projector.bias)]
        self._v = [np.zeros_like(projector.weights), np.zeros_like(projector.bias)]

    def loss_and_grads(self, batch: PairBatch) -> tuple[float, np.ndarray, np.ndarray]:
        """Weighted place + object loss of the batch and its gradients for W and b."""
        cfg = self.cfg
        w = self.projector.weights
        grad_w = np.zeros_like(w)
        grad_b = np.zeros_like(self.projector.bias)
        total = 0.0
        for x, pairs, labels, kind, weight in (
            (batch.place_x, batch.place_pairs, batch.place_labels, "place", cfg.place_loss_weight),
            (batch.object_x, batch.object_pairs, batch.object_labels, "object", cfg.object_loss_weight),
        ):
            if weight == 0 or len(pairs) == 0:
                continue
            z = self.projector.project(x)
            loss, grad_z = batch_pair_losses(z, pairs, labels, kind, cfg.positive_weight, cfg.bce_scale)
            total += weight * loss
            grad_w += weight * grad_z.T @ x
            grad_b += weight * grad_z.sum(axis=0)
        return total, grad_w, grad_b

    def step(self, batch: PairBatch) -> float:
        """One optimizer update; returns the loss before the update."""
        loss, grad_w, grad_b = self.loss_and_grads(batch)
        self.step_count += 1
        beta1, beta2 = ADAM_BETAS
        lr = self.cfg.learning_rate
        params = [self.projector.weights, self.projector.bias]
        for k, (param, grad) in enumerate(zip(params, (grad_w, grad_b))):
            self._m[k] = beta1 * self._m[k] + (1 - beta1) * grad
            self._v[k] = beta2 * self._v[k] + (1 - beta2) * grad**2
            m_hat = self._m[k] / (1 - beta1**self.step_count)
            v_hat = self._v[k] / (1 - beta2**self.step_count)
            if k == 0:
                param *= 1 - lr * self.cfg.weight_decay
            param -= lr * m_hat / (np.sqrt(v_hat) + ADAM_EPS)
        return loss


def steps_per_epoch(num_scenes: int, cfg: ProbeConfig) -> int:
    return max(1, math.ceil(num_scenes / cfg.scenes_per_batch))


def projected_coding_rate(projector: Projector, scenes: Sequence[TrainingScene], eps: float) -> float:
    """Coding rate of all unit-normalized projected place embeddings."""
    z = projector.project(np.concatenate([s.emb.place for s in scenes], axis=0))
    norms = np.linalg.norm(z, axis=1, keepdims=True)
    return coding_rate(z / np.maximum(norms, 1e-12), eps)


def fit_probe(
    scenes: Sequence[TrainingScene], cfg: ProbeConfig, projector: Optional[Projector] = None
) -> ProbeResult:
    """Train a projector and record the per-epoch loss and coding rate."""
    if not scenes:
        raise ValueError("no training scenes")
    dims = {s.emb.dim for s in scenes}
    if dims != {cfg.in_dim}:
        raise ValueError(f"embedding dims {sorted(dims)} do not match in_dim {cfg.in_dim}")

    rng = np.random.default_rng(cfg.seed)
    if projector is None:
        projector = Projector.init(cfg.in_dim, cfg.out_dim, cfg.seed)
    else:
        projector = Projector(projector.weights.copy(), projector.bias.copy())
    trainer = ProbeTrainer(projector, cfg)
    result = ProbeResult(projector=projector)
    n_steps = steps_per_epoch(len(scenes), cfg)

    for epoch in range(cfg.epochs):
        losses = [trainer.step(sample_batch(scenes, cfg, rng)) for _ in range(n_steps)]
        stats = EpochStats(
            epoch=epoch,
            loss=float(np.mean(losses)),
            coding_rate=projected_coding_rate(projector, scenes, cfg.coding_rate_eps),
        )
        result.history.append(stats)
        logger.debug(f"Epoch {epoch}: loss {stats.loss:.6f}, coding rate {stats.coding_rate:.4f}")

    if result.history:
        last = result.history[-1]
        logger.info(f"Trained probe for {cfg.epochs} epochs: loss {last.loss:.6f}, coding rate {last.coding_rate:.4f}")
    return result


def train_probe(scenes: Sequence[TrainingScene], cfg: ProbeConfig) -> Projector:
    """Train a linear probe on at least two scenes and return it."""
    if len(scenes) < 2:
        raise ValueError(f"probe training needs at least 2 scenes, got {len(scenes)}")
    return fit_probe(scenes, cfg).projector
