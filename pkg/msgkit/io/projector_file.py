"""Projector file: {"in_dim", "out_dim", "weights": row-major, "bias"} at full precision."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import numpy as np

from msgkit.embedlab import Projector
from msgkit.errors import FormatError
from msgkit.io.atomic import read_json, require, write_json_atomic


def projector_to_dict(projector: Projector) -> dict[str, Any]:
    return {
        "in_dim": projector.in_dim,
        "out_dim": projector.out_dim,
        "weights": [float(v) for v in projector.weights.ravel()],
        "bias": [float(v) for v in projector.bias],
    }


def projector_from_dict(data: Any, where: str = "projector") -> Projector:
    try:
        in_dim = int(require(data, "in_dim", where))
        out_dim = int(require(data, "out_dim", where))
        weights = np.asarray(require(data, "weights", where), dtype=np.float64)
        bias = np.asarray(require(data, "bias", where), dtype=np.float64)
        if weights.size != in_dim * out_dim or bias.size != out_dim:
            raise FormatError(f"{where}: weights/bias sizes do not match {out_dim} x {in_dim}")
        return Projector(weights.reshape(out_dim, in_dim), bias)
    except (TypeError, ValueError) as e:
        if isinstance(e, FormatError):
            raise
        raise FormatError(f"{where}: malformed projector ({e})") from e


def save_projector(path: str | Path, projector: Projector) -> Path:
    return write_json_atomic(path, projector_to_dict(projector))


def load_projector(path: str | Path) -> Projector:
    return projector_from_dict(read_json(path), str(path))
