"""The canvas document: elements, positions, and typed connections.

A QueryGraph is the drag-and-drop representation of one SELECT query. Each
element mirrors one query clause, connections express which clause feeds
which, and the allowed connection pairs encode SQL's clause dependencies
(for example HAVING only attaches to GROUP BY). Elements can never leave
the canvas: positions are clamped so the full element extent stays inside.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from pgstudio.graph.errors import (
    CycleDetected,
    DuplicateConnection,
    DuplicateElementId,
    DuplicateSelect,
    IllegalConnection,
    UnknownConnection,
    UnknownElement,
)

DEFAULT_CANVAS_WIDTH = 800
DEFAULT_CANVAS_HEIGHT = 600
ELEMENT_WIDTH = 120
ELEMENT_HEIGHT = 60


class ElementKind(str, Enum):
    SELECT = "SELECT"
    TABLE = "TABLE"
    WHERE = "WHERE"
    GROUP_BY = "GROUP_BY"
    HAVING = "HAVING"
    ORDER_BY = "ORDER_BY"
    JOIN = "JOIN"

    @property
    def display(self) -> str:
        return self.value.replace("_", " ")


# which element may feed which: every pair not listed is forbidden
ALLOWED_CONNECTIONS: frozenset[tuple[ElementKind, ElementKind]] = frozenset(
    {
        (ElementKind.TABLE, ElementKind.SELECT),
        (ElementKind.TABLE, ElementKind.JOIN),
        (ElementKind.JOIN, ElementKind.SELECT),
        (ElementKind.WHERE, ElementKind.SELECT),
        (ElementKind.GROUP_BY, ElementKind.SELECT),
        (ElementKind.HAVING, ElementKind.GROUP_BY),
        (ElementKind.ORDER_BY, ElementKind.SELECT),
    }
)


def allowed_targets(kind: ElementKind) -> tuple[ElementKind, ...]:
    return tuple(
        sorted((to for fr, to in ALLOWED_CONNECTIONS if fr is kind), key=lambda k: k.value)
    )


def _connection_guidance(from_kind: ElementKind, to_kind: ElementKind) -> str:
    if from_kind is ElementKind.HAVING:
        return (
            "HAVING filters the groups that GROUP BY builds, so it only "
            "connects to a GROUP BY element. Add one first."
        )
    if from_kind is ElementKind.SELECT:
        return (
            "SELECT is the output of the query; other elements connect "
            "into it, not the other way around."
        )
    targets = allowed_targets(from_kind)
    names = " or ".join(t.display for t in targets)
    return f"A {from_kind.display} element connects to {names}."


@dataclass
class CanvasElement:
    id: str
    kind: ElementKind
    x: float
    y: float
    properties: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Connection:
    source: str
    target: str


class QueryGraph:
    """One canvas. Mutations happen in place; the workspace serializes writers."""

    def __init__(
        self,
        canvas_width: int = DEFAULT_CANVAS_WIDTH,
        canvas_height: int = DEFAULT_CANVAS_HEIGHT,
    ) -> None:
        self.canvas_width = canvas_width
        self.canvas_height = canvas_height
        self.elements: dict[str, CanvasElement] = {}
        self.connections: list[Connection] = []
        self._next_index = 1

    # -- reads

    def element(self, element_id: str) -> CanvasElement:
        found = self.elements.get(element_id)
        if found is None:
            raise UnknownElement(element_id)
        return found

    def elements_in_order(self) -> list[CanvasElement]:
        """Elements in creation order (ids are e1, e2, ...)."""
        return [self.elements[key] for key in sorted(self.elements, key=_id_sort_key)]

    def sources_of(self, element_id: str) -> list[CanvasElement]:
        """Elements feeding element_id, in creation order."""
        incoming = [c.source for c in self.connections if c.target == element_id]
        return [self.elements[i] for i in sorted(incoming, key=_id_sort_key)]

    def targets_of(self, element_id: str) -> list[CanvasElement]:
        outgoing = [c.target for c in self.connections if c.source == element_id]
        return [self.elements[i] for i in sorted(outgoing, key=_id_sort_key)]

    def single_select(self) -> CanvasElement | None:
        for element in self.elements.values():
            if element.kind is ElementKind.SELECT:
                return element
        return None

    def clamp(self, x: float, y: float) -> tuple[float, float]:
        """Pull a position back so the whole element extent stays on canvas.

        Always floats: a clamped coordinate must serialize the same way
        whether it came from a drag, a document, or an undo replay."""
        max_x = max(0, self.canvas_width - ELEMENT_WIDTH)
        max_y = max(0, self.canvas_height - ELEMENT_HEIGHT)
        return (float(min(max(x, 0), max_x)), float(min(max(y, 0), max_y)))

    # -- mutations

    def drop_element(
        self,
        kind: ElementKind,
        position: tuple[float, float],
        element_id: str | None = None,
    ) -> str:
        """Add an element. element_id is normally allocated here; replaying a
        recorded action passes the id it was given the first time."""
        if kind is ElementKind.SELECT and self.single_select() is not None:
            raise DuplicateSelect()
        if element_id is None:
            element_id = f"e{self._next_index}"
            self._next_index += 1
        else:
            if element_id in self.elements:
                raise DuplicateElementId(element_id)
            digits = element_id[1:]
            if element_id.startswith("e") and digits.isdigit():
                self._next_index = max(self._next_index, int(digits) + 1)
        x, y = self.clamp(*position)
        self.elements[element_id] = CanvasElement(id=element_id, kind=kind, x=x, y=y)
        return element_id

    def move_element(self, element_id: str, position: tuple[float, float]) -> None:
        element = self.element(element_id)
        element.x, element.y = self.clamp(*position)

    def delete_element(self, element_id: str) -> CanvasElement:
        """Remove an element and every connection touching it."""
        element = self.element(element_id)
        del self.elements[element_id]
        self.connections = [
            c for c in self.connections if element_id not in (c.source, c.target)
        ]
        return element

    def connect(self, source_id: str, target_id: str) -> None:
        source = self.element(source_id)
        target = self.element(target_id)
        pair = (source.kind, target.kind)
        if pair not in ALLOWED_CONNECTIONS:
            raise IllegalConnection(
                source.kind.display,
                target.kind.display,
                _connection_guidance(source.kind, target.kind),
            )
        if any(c.source == source_id and c.target == target_id for c in self.connections):
            raise DuplicateConnection()
        if self._would_cycle(source_id, target_id):
            raise CycleDetected()
        self.connections.append(Connection(source=source_id, target=target_id))

    def disconnect(self, source_id: str, target_id: str) -> None:
        before = len(self.connections)
        self.connections = [
            c
            for c in self.connections
            if not (c.source == source_id and c.target == target_id)
        ]
        if len(self.connections) == before:
            raise UnknownConnection(source_id, target_id)

    def _would_cycle(self, source_id: str, target_id: str) -> bool:
        """True when target already reaches source through existing connections."""
        if source_id == target_id:
            return True
        stack = [target_id]
        seen = set()
        while stack:
            current = stack.pop()
            if current == source_id:
                return True
            if current in seen:
                continue
            seen.add(current)
            stack.extend(c.target for c in self.connections if c.source == current)
        return False


def _id_sort_key(element_id: str) -> tuple[int, str]:
    digits = element_id[1:]
    if element_id.startswith("e") and digits.isdigit():
        return (int(digits), element_id)
    return (1_000_000_000, element_id)
