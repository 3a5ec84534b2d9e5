"""Errors raised by query analysis and planning."""

from __future__ import annotations


class AdvisorError(Exception):
    """Base class for analysis and planning failures."""


class StaleDiagnostic(AdvisorError):
    """The query changed after the diagnostic was produced."""

    def __init__(self) -> None:
        super().__init__(
            "This tip was produced for an earlier version of the query. "
            "Analyze the current query again to get fresh tips."
        )


class NoRewriteAvailable(AdvisorError):
    """The diagnostic is a tip only and carries no automatic rewrite."""

    def __init__(self) -> None:
        super().__init__("This tip has no automatic rewrite to apply.")


class UnsupportedShape(AdvisorError):
    """The planner cannot cost this query shape."""

    def __init__(self, construct: str) -> None:
        self.construct = construct
        super().__init__(
            f"Plan comparison does not support {construct} yet. "
            "It covers single-table queries and queries with one join."
        )
