"""Saving and loading a canvas as a plain dict.

The document shape is part of the storage contract:

    {"version": 1,
     "canvas": {"width": 800, "height": 600},
     "elements": [{"id": "e1", "kind": "SELECT", "x": 10, "y": 20,
                   "properties": {"columns": ["*"]}}],
     "connections": [{"from": "e2", "to": "e1"}]}

Loading rebuilds the graph through the same checks the editor applies, so a
hand-edited document cannot smuggle in an illegal connection or a second
SELECT element.
"""

from __future__ import annotations

from typing import Any

from pgstudio.graph.errors import GraphError, MalformedGraphDocument
from pgstudio.graph.model import CanvasElement, ElementKind, QueryGraph, _id_sort_key

DOCUMENT_VERSION = 1


def graph_to_dict(graph: QueryGraph) -> dict[str, Any]:
    return {
        "version": DOCUMENT_VERSION,
        "canvas": {"width": graph.canvas_width, "height": graph.canvas_height},
        "elements": [
            {
                "id": element.id,
                "kind": element.kind.value,
                "x": element.x,
                "y": element.y,
                "properties": dict(element.properties),
            }
            for element in graph.elements_in_order()
        ],
        # sorted so that the same canvas always saves as the same bytes,
        # no matter the order its connections were drawn or redrawn in
        "connections": [
            {"from": connection.source, "to": connection.target}
            for connection in sorted(
                graph.connections,
                key=lambda c: (_id_sort_key(c.source), _id_sort_key(c.target)),
            )
        ],
    }


def graph_from_dict(doc: Any) -> QueryGraph:
    if not isinstance(doc, dict):
        raise MalformedGraphDocument("the document is not an object")
    if doc.get("version") != DOCUMENT_VERSION:
        raise MalformedGraphDocument(f"unsupported document version {doc.get('version')!r}")

    canvas = doc.get("canvas")
    if not isinstance(canvas, dict):
        raise MalformedGraphDocument("missing canvas dimensions")
    width = _number(canvas.get("width"), "canvas width")
    height = _number(canvas.get("height"), "canvas height")
    graph = QueryGraph(canvas_width=width, canvas_height=height)

    elements = doc.get("elements")
    connections = doc.get("connections")
    if not isinstance(elements, list) or not isinstance(connections, list):
        raise MalformedGraphDocument("elements and connections must be lists")

    highest = 0
    for entry in elements:
        if not isinstance(entry, dict):
            raise MalformedGraphDocument("each element must be an object")
        element_id = entry.get("id")
        if not isinstance(element_id, str) or not element_id:
            raise MalformedGraphDocument("each element needs a string id")
        if element_id in graph.elements:
            raise MalformedGraphDocument(f'duplicate element id "{element_id}"')
        try:
            kind = ElementKind(entry.get("kind"))
        except ValueError:
            raise MalformedGraphDocument(
                f'unknown element kind {entry.get("kind")!r}'
            ) from None
        if kind is ElementKind.SELECT and graph.single_select() is not None:
            raise MalformedGraphDocument("a query can only have one SELECT element")
        properties = entry.get("properties", {})
        if not isinstance(properties, dict):
            raise MalformedGraphDocument("element properties must be an object")
        x, y = graph.clamp(_number(entry.get("x"), "x"), _number(entry.get("y"), "y"))
        graph.elements[element_id] = CanvasElement(
            id=element_id, kind=kind, x=x, y=y, properties=dict(properties)
        )
        if element_id.startswith("e") and element_id[1:].isdigit():
            highest = max(highest, int(element_id[1:]))
    graph._next_index = highest + 1

    for entry in connections:
        if not isinstance(entry, dict) or "from" not in entry or "to" not in entry:
            raise MalformedGraphDocument('each connection needs "from" and "to" ids')
        try:
            graph.connect(entry["from"], entry["to"])
        except GraphError as error:
            raise MalformedGraphDocument(str(error)) from error
    return graph


def _number(value: Any, label: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MalformedGraphDocument(f"{label} must be a number")
    return value
