"""Coding rate of an embedding matrix, a collapse diagnostic."""

from __future__ import annotations

import numpy as np


def _alpha(z: np.ndarray, eps: float) -> float:
    n, d = z.shape
    return d / (n * eps**2)


def _check(z, eps: float) -> np.ndarray:
    if eps <= 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    z = np.asarray(z, dtype=np.float64)
    if z.ndim != 2 or z.shape[0] == 0:
        raise ValueError(f"expected a non-empty n x d matrix, got shape {z.shape}")
    if not np.isfinite(z).all():
        raise ValueError("coding rate input must be finite")
    return z


def coding_rate(z: np.ndarray, eps: float = 0.5) -> float:
    """R = 1/2 log det(I + d / (n eps^2) Z^T Z); zero iff Z = 0."""
    z = _check(z, eps)
    d = z.shape[1]
    _, logdet = np.linalg.slogdet(np.eye(d) + _alpha(z, eps) * z.T @ z)
    return 0.5 * float(logdet)


def coding_rate_gradient(z: np.ndarray, eps: float = 0.5) -> np.ndarray:
    """Gradient of coding_rate with respect to Z (n fixed): alpha Z (I + alpha Z^T Z)^-1."""
    z = _check(z, eps)
    d = z.shape[1]
    alpha = _alpha(z, eps)
    gram = np.eye(d) + alpha * z.T @ z
    return alpha * np.linalg.solve(gram, z.T).T
