"""Run manifest written next to every command's outputs."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

from msgkit.io.atomic import write_json_atomic
from msgkit.version import VERSION

MANIFEST_NAME = "manifest.json"


@dataclass
class RunManifest:
    """What ran, with which settings, on which files, and how long it took."""

    command: str
    config: dict[str, Any] = field(default_factory=dict)
    inputs: dict[str, str] = field(default_factory=dict)
    outputs: dict[str, str] = field(default_factory=dict)
    seed: Optional[int] = None
    wall_time_s: float = 0.0
    version: str = VERSION

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def manifest_path_for(output: str | Path) -> Path:
    """Manifest location for an output: inside it when it is a directory, else beside it."""
    output = Path(output)
    if output.is_dir():
        return output / MANIFEST_NAME
    return output.with_name(f"{output.stem}.{MANIFEST_NAME}")


def write_manifest(path: str | Path, manifest: RunManifest) -> Path:
    return write_json_atomic(path, manifest.to_dict())
