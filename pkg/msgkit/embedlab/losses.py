"""
Place and object training losses with analytic gradients.

Place pairs regress cosine onto 1 (same place) or 0 (different place).
Object pairs use a positively weighted binary cross-entropy on a logistic of
the scaled cosine.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit, log_expit

from msgkit.embedlab.models import LossResult

LOG_FLOOR = np.log(1e-12)


def cosine_with_grads(a: np.ndarray, b: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Cosine similarity of two vectors and its gradient with respect to each."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0 or nb == 0:
        raise ValueError("cosine undefined for a zero-norm vector")
    cos = float(a @ b) / (na * nb)
    grad_a = b / (na * nb) - cos * a / na**2
    grad_b = a / (na * nb) - cos * b / nb**2
    return cos, grad_a, grad_b


def place_loss(e1: np.ndarray, e2: np.ndarray, same_place: bool) -> LossResult:
    """(cos(e1, e2) - y)^2 with y = 1 for the same place, 0 otherwise."""
    cos, grad_a, grad_b = cosine_with_grads(e1, e2)
    residual = cos - (1.0 if same_place else 0.0)
    return LossResult(residual**2, (2.0 * residual * grad_a, 2.0 * residual * grad_b))


def _bce_terms(cos_sim, y, positive_weight: float, scale: float):
    """Elementwise weighted BCE on p = sigmoid(scale * cos) and its derivative in cos."""
    logits = scale * np.asarray(cos_sim, dtype=np.float64)
    log_p = np.maximum(log_expit(logits), LOG_FLOOR)
    log_q = np.maximum(log_expit(-logits), LOG_FLOOR)
    loss = -(positive_weight * y * log_p + (1.0 - y) * log_q)
    p = expit(logits)
    dloss = -positive_weight * y * scale * (1.0 - p) + (1.0 - y) * scale * p
    return loss, dloss


def object_loss(
    cos_sim: float, same_object: bool, positive_weight: float = 10.0, scale: float = 10.0
) -> LossResult:
    """
    Weighted BCE -(w*y*ln p + (1-y)*ln(1-p)) with p = sigmoid(scale * cos_sim).

    The gradient is with respect to cos_sim.
    """
    y = 1.0 if same_object else 0.0
    loss, dloss = _bce_terms(cos_sim, y, positive_weight, scale)
    return LossResult(float(loss), (np.asarray(float(dloss)),))


def object_loss_embeddings(
    e1: np.ndarray, e2: np.ndarray, same_object: bool, positive_weight: float = 10.0, scale: float = 10.0
) -> LossResult:
    """object_loss on the cosine of two embeddings, with gradients with respect to both."""
    cos, grad_a, grad_b = cosine_with_grads(e1, e2)
    result = object_loss(cos, same_object, positive_weight, scale)
    dcos = float(result.grads[0])
    return LossResult(result.loss, (dcos * grad_a, dcos * grad_b))


def batch_pair_losses(
    z: np.ndarray,
    pairs: np.ndarray,
    labels: np.ndarray,
    kind: str,
    positive_weight: float = 10.0,
    scale: float = 10.0,
) -> tuple[float, np.ndarray]:
    """
    Mean loss over index pairs into the rows of z, and its gradient with respect to z.

    kind is "place" (squared cosine residual) or "object" (weighted BCE).
    """
    grad = np.zeros_like(z)
    if len(pairs) == 0:
        return 0.0, grad

    a = z[pairs[:, 0]]
    b = z[pairs[:, 1]]
    na = np.maximum(np.linalg.norm(a, axis=1), 1e-12)[:, None]
    nb = np.maximum(np.linalg.norm(b, axis=1), 1e-12)[:, None]
    cos = np.sum(a * b, axis=1) / (na[:, 0] * nb[:, 0])

    if kind == "place":
        loss = (cos - labels) ** 2
        dcos = 2.0 * (cos - labels)
    elif kind == "object":
        loss, dcos = _bce_terms(cos, labels, positive_weight, scale)
    else:
        raise ValueError(f"unknown pair loss kind {kind!r}")

    m = len(pairs)
    dcos = (dcos / m)[:, None]
    grad_a = dcos * (b / (na * nb) - cos[:, None] * a / na**2)
    grad_b = dcos * (a / (na * nb) - cos[:, None] * b / nb**2)
    # Fixed accumulation order keeps repeated runs bitwise identical
    np.add.at(grad, pairs[:, 0], grad_a)
    np.add.at(grad, pairs[:, 1], grad_b)
    return float(np.mean(loss)), grad
