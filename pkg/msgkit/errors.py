"""Exception hierarchy shared by every msgkit subpackage.

Every error derives from MSGError; the validation-style errors also derive from
ValueError so callers that only know about ValueError keep working. The CLI maps
MSGError/ValueError to exit code 2 and OSError to exit code 3.
"""

from __future__ import annotations


class MSGError(Exception):
    """Base class for all msgkit errors."""


class GraphValidationError(MSGError, ValueError):
    """A graph or adjacency block violates the data-model invariants."""

    def __init__(self, violations: list[str] | str):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid graph")


class SceneError(MSGError, ValueError):
    """A scene annotation cannot be used for the requested operation."""


class EmbeddingError(MSGError, ValueError):
    """Embeddings are malformed or not aligned with their scene."""


class MetricError(MSGError, ValueError):
    """A metric is undefined for its inputs (mismatched places, empty objects, ...)."""


class FormatError(MSGError, ValueError):
    """A file on disk is malformed, truncated or of an unsupported version."""


class ConfigError(MSGError, ValueError):
    """A configuration value is missing or out of range."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
