"""2D box overlap measures."""

from __future__ import annotations

from msgkit.geometry.models import Box2


def _intersection(a: Box2, b: Box2) -> float:
    w = min(a.x2, b.x2) - max(a.x1, b.x1)
    h = min(a.y2, b.y2) - max(a.y1, b.y1)
    if w <= 0 or h <= 0:
        return 0.0
    return w * h


def box_iou(a: Box2, b: Box2) -> float:
    """Intersection over union, in [0, 1]."""
    inter = _intersection(a, b)
    union = a.area + b.area - inter
    return inter / union


def giou(a: Box2, b: Box2) -> float:
    """
    Generalized IoU, in (-1, 1].

    IoU minus the fraction of the smallest enclosing box not covered by the union.
    """
    inter = _intersection(a, b)
    union = a.area + b.area - inter
    enclosing = (max(a.x2, b.x2) - min(a.x1, b.x1)) * (max(a.y2, b.y2) - min(a.y1, b.y1))
    return inter / union - (enclosing - union) / enclosing
