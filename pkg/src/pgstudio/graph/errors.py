"""Errors raised by canvas-document operations."""

from __future__ import annotations


class GraphError(Exception):
    """Base class for canvas-document failures."""


class UnknownElement(GraphError):
    def __init__(self, element_id: str) -> None:
        self.element_id = element_id
        super().__init__(f"No element with id {element_id!r} is on the canvas.")


class DuplicateElementId(GraphError):
    def __init__(self, element_id: str) -> None:
        self.element_id = element_id
        super().__init__(f"An element with id {element_id!r} is already on the canvas.")


class DuplicateSelect(GraphError):
    def __init__(self) -> None:
        super().__init__(
            "The canvas already has a SELECT element. A query has one output, "
            "so every canvas has exactly one SELECT; connect the other elements "
            "into it instead."
        )


class IllegalConnection(GraphError):
    def __init__(self, from_kind: str, to_kind: str, guidance: str) -> None:
        self.from_kind = from_kind
        self.to_kind = to_kind
        super().__init__(
            f"A {from_kind} element cannot connect to a {to_kind} element. {guidance}"
        )


class DuplicateConnection(GraphError):
    def __init__(self) -> None:
        super().__init__("These two elements are already connected.")


class UnknownConnection(GraphError):
    def __init__(self, source_id: str, target_id: str) -> None:
        super().__init__(f"There is no connection from {source_id!r} to {target_id!r}.")


class CycleDetected(GraphError):
    def __init__(self) -> None:
        super().__init__(
            "This connection would create a loop. Connections must flow "
            "toward the SELECT element."
        )


class UnknownProperty(GraphError):
    def __init__(self, key: str, kind: str) -> None:
        self.key = key
        super().__init__(f"A {kind} element has no property named {key!r}.")


class IllegalValue(GraphError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class IncompleteGraph(GraphError):
    """The canvas does not describe a complete query yet; carries the diagnostics."""

    def __init__(self, diagnostics) -> None:
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0].problem if self.diagnostics else "the canvas is empty"
        super().__init__(f"The canvas is not a complete query yet: {first}")


class MalformedGraphDocument(GraphError):
    def __init__(self, detail: str) -> None:
        super().__init__(f"This saved canvas cannot be loaded: {detail}")
