"""Catalog error types."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from pgstudio.catalog.validation import Violation


class CatalogError(Exception):
    pass


class InvalidDefinition(CatalogError):
    """A definition failed validation; carries every violation found."""

    def __init__(self, violations: tuple["Violation", ...]) -> None:
        super().__init__("; ".join(v.message for v in violations) or "invalid definition")
        self.violations = violations


class UnknownDataType(CatalogError):
    def __init__(self, name: str, suggestion: str | None) -> None:
        message = f"Unknown data type {name!r}."
        if suggestion:
            message += f' Did you mean "{suggestion}"?'
        super().__init__(message)
        self.name = name
        self.suggestion = suggestion


class UnknownTable(CatalogError):
    def __init__(self, name: str) -> None:
        super().__init__(f"No table named {name!r} exists in the catalog.")
        self.name = name


class UnknownColumn(CatalogError):
    def __init__(self, table: str, column: str) -> None:
        super().__init__(f"Table {table!r} has no column named {column!r}.")
        self.table = table
        self.column = column


class DuplicateObject(CatalogError):
    pass
