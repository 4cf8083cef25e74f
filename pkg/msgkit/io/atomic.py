"""Atomic file writes and guarded JSON reads."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any

from msgkit.errors import FormatError


def write_bytes_atomic(path: str | Path, data: bytes) -> Path:
    """Write to a temporary file in the target directory, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return path


def write_text_atomic(path: str | Path, text: str) -> Path:
    return write_bytes_atomic(path, text.encode("utf-8"))


def write_json_atomic(path: str | Path, obj: Any) -> Path:
    return write_text_atomic(path, json.dumps(obj, indent=2) + "\n")


def read_json(path: str | Path) -> Any:
    """Parse a UTF-8 JSON file; malformed content raises FormatError."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from e


def require(obj: Any, key: str, where: str) -> Any:
    """obj[key] for a JSON object, or FormatError naming what is missing."""
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected a JSON object")
    if key not in obj:
        raise FormatError(f"{where}: missing '{key}'")
    return obj[key]
