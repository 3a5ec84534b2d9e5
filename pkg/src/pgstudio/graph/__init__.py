"""Visual query canvas: elements, connections, properties, and lowering to SQL."""

from pgstudio.graph.errors import (
    CycleDetected,
    DuplicateConnection,
    DuplicateElementId,
    DuplicateSelect,
    GraphError,
    IllegalConnection,
    IllegalValue,
    IncompleteGraph,
    MalformedGraphDocument,
    UnknownConnection,
    UnknownElement,
    UnknownProperty,
)
from pgstudio.graph.lowering import GraphDiagnostic, graph_to_ast, validate_graph
from pgstudio.graph.model import (
    ALLOWED_CONNECTIONS,
    DEFAULT_CANVAS_HEIGHT,
    DEFAULT_CANVAS_WIDTH,
    ELEMENT_HEIGHT,
    ELEMENT_WIDTH,
    CanvasElement,
    Connection,
    ElementKind,
    QueryGraph,
    allowed_targets,
)
from pgstudio.graph.properties import (
    PropertyEntry,
    PropertySchema,
    column_expr,
    parse_value,
    property_schema_for,
    scope_columns,
    scope_tables,
    set_property,
)
from pgstudio.graph.serialize import DOCUMENT_VERSION, graph_from_dict, graph_to_dict

__all__ = [
    "ALLOWED_CONNECTIONS",
    "CanvasElement",
    "Connection",
    "CycleDetected",
    "DEFAULT_CANVAS_HEIGHT",
    "DEFAULT_CANVAS_WIDTH",
    "DOCUMENT_VERSION",
    "DuplicateConnection",
    "DuplicateElementId",
    "DuplicateSelect",
    "ELEMENT_HEIGHT",
    "ELEMENT_WIDTH",
    "ElementKind",
    "GraphDiagnostic",
    "GraphError",
    "IllegalConnection",
    "IllegalValue",
    "IncompleteGraph",
    "MalformedGraphDocument",
    "PropertyEntry",
    "PropertySchema",
    "QueryGraph",
    "UnknownConnection",
    "UnknownElement",
    "UnknownProperty",
    "allowed_targets",
    "column_expr",
    "graph_from_dict",
    "graph_to_ast",
    "graph_to_dict",
    "parse_value",
    "property_schema_for",
    "scope_columns",
    "scope_tables",
    "set_property",
    "validate_graph",
]
