"""Shared validation result shapes used across catalog checks."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    field: str | None = None
    position: int | None = None
    hint: str | None = None


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[Violation, ...] = ()
    # Presentation advice that holds whether or not the definition is valid,
    # e.g. {"hide_unique": True} when an index method cannot enforce UNIQUE.
    ui_hints: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def first_message(self) -> str:
        return self.violations[0].message if self.violations else ""
