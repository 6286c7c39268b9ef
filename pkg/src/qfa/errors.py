"""Exception types shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


class QfaError(Exception):
    """Base class for all package errors."""


class DimensionError(QfaError, ValueError):
    """Matrix or vector shapes are inconsistent with the operation."""


class ValidationError(QfaError, ValueError):
    """A value fails a structural requirement (e.g. non-Hermitian input)."""


class InputError(QfaError, ValueError):
    """A word or symbol is not admissible for the given model."""


class ModeError(QfaError, ValueError):
    """The requested computation mode cannot be applied to these inputs."""


@dataclass(frozen=True)
class Violation:
    """One failed model invariant.

    ``location`` is a document-style path ("unitaries.a", "initial", ...)
    so that file-level tooling can point at the offending field; ``message``
    is the human-readable description.
    """

    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.location}: {self.message}"


class ModelError(QfaError, ValueError):
    """A model description violates one or more invariants.

    Carries the complete list of violations, not just the first one found.
    """

    def __init__(self, violations: list[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class DocumentError(QfaError, ValueError):
    """A serialized automaton document is malformed or fails validation."""
