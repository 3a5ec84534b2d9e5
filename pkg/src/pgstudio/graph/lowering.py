"""Checking a canvas for completeness and lowering it to a query AST.

validate_graph returns scaffolding diagnostics: each names the element that
needs attention, what is missing, and the next step to take. graph_to_ast
refuses to lower until the list is empty, then produces a deterministic
SelectQuery: tables and joins become FROM, each clause element becomes its
clause, and multiple WHERE or HAVING elements are joined with AND in the
order they were dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

from pgstudio.catalog.model import SchemaCatalog
from pgstudio.graph.errors import IncompleteGraph
from pgstudio.graph.model import CanvasElement, ElementKind, QueryGraph
from pgstudio.graph.properties import (
    column_expr,
    parse_value,
    property_schema_for,
    scope_columns,
    scope_tables,
)
from pgstudio.sqlast.nodes import (
    STAR,
    BaseTable,
    BinaryOp,
    FuncCall,
    Join,
    OrderItem,
    SelectItem,
    SelectQuery,
    and_join,
)


@dataclass(frozen=True)
class GraphDiagnostic:
    """One scaffolding step: which element, what is wrong, what to do next."""

    element_id: str | None
    problem: str
    hint: str


def validate_graph(graph: QueryGraph, catalog: SchemaCatalog) -> list[GraphDiagnostic]:
    select = graph.single_select()
    if select is None:
        return [
            GraphDiagnostic(
                element_id=None,
                problem="The canvas has no SELECT element.",
                hint="Drag a SELECT element onto the canvas; it is the query's output.",
            )
        ]

    diagnostics: list[GraphDiagnostic] = []
    sources = graph.sources_of(select.id)
    feeding = [e for e in sources if e.kind in (ElementKind.TABLE, ElementKind.JOIN)]
    if not feeding:
        diagnostics.append(GraphDiagnostic(
            select.id,
            "No source table is connected to the SELECT element.",
            "Connect a TABLE element (or a JOIN combining two tables) to SELECT.",
        ))
    elif len(feeding) > 1:
        diagnostics.append(GraphDiagnostic(
            select.id,
            "The SELECT element has more than one row source connected.",
            "Keep exactly one: a single TABLE, or one JOIN fed by two tables.",
        ))

    for element in graph.elements_in_order():
        checker = _CHECKERS[element.kind]
        diagnostics.extend(checker(graph, element, catalog))
    return diagnostics


def graph_to_ast(graph: QueryGraph, catalog: SchemaCatalog) -> SelectQuery:
    diagnostics = validate_graph(graph, catalog)
    if diagnostics:
        raise IncompleteGraph(diagnostics)

    select = graph.single_select()
    assert select is not None
    tables = scope_tables(graph, select.id, catalog)
    columns_in_scope = scope_columns(tables)

    from_table, joins = _lower_sources(graph, select)

    if select.properties["columns"] == ["*"]:
        select_list: object = STAR
    else:
        select_list = tuple(
            SelectItem(column_expr(name)) for name in select.properties["columns"]
        )

    where_parts = []
    group_exprs = []
    having_parts = []
    order_items = []
    for element in graph.elements_in_order():
        if element.kind is ElementKind.WHERE and graph.targets_of(element.id):
            where_parts.append(BinaryOp(
                element.properties["operator"],
                column_expr(element.properties["column"]),
                parse_value(element.properties["value"], columns_in_scope),
            ))
        elif element.kind is ElementKind.GROUP_BY and graph.targets_of(element.id):
            group_exprs.extend(column_expr(name) for name in element.properties["columns"])
        elif element.kind is ElementKind.HAVING and graph.targets_of(element.id):
            having_parts.append(BinaryOp(
                element.properties["operator"],
                _aggregate_expr(element),
                parse_value(element.properties["value"], columns_in_scope),
            ))
        elif element.kind is ElementKind.ORDER_BY and graph.targets_of(element.id):
            order_items.append(OrderItem(
                column_expr(element.properties["column"]),
                descending=element.properties.get("direction") == "descending",
            ))

    return SelectQuery(
        select=select_list,
        from_table=from_table,
        joins=joins,
        where=and_join(where_parts),
        group_by=tuple(group_exprs),
        having=and_join(having_parts),
        order_by=tuple(order_items),
        distinct=bool(select.properties.get("distinct", False)),
    )


def _lower_sources(graph: QueryGraph, select: CanvasElement):
    for element in graph.sources_of(select.id):
        if element.kind is ElementKind.TABLE:
            return BaseTable(str(element.properties["table_name"])), ()
        if element.kind is ElementKind.JOIN:
            left, right = [
                e for e in graph.sources_of(element.id) if e.kind is ElementKind.TABLE
            ][:2]
            left_name = str(left.properties["table_name"])
            right_name = str(right.properties["table_name"])
            condition = BinaryOp(
                "=",
                column_expr(f"{left_name}.{element.properties['left_column']}"),
                column_expr(f"{right_name}.{element.properties['right_column']}"),
            )
            return BaseTable(left_name), (Join(BaseTable(right_name), condition),)
    raise AssertionError("validated graph always has a row source")


def _aggregate_expr(element: CanvasElement) -> FuncCall:
    function = element.properties["function"]
    column = element.properties["column"]
    if column == "*":
        return FuncCall("count", star=True)
    return FuncCall(function, args=(column_expr(column),))


# -- per-kind completeness checks ---------------------------------------------------


def _missing(
    graph: QueryGraph, element: CanvasElement, catalog: SchemaCatalog, keys: list[str]
) -> list[GraphDiagnostic]:
    """Required properties that are unset, reported with the schema's own help text."""
    schema = property_schema_for(graph, element.id, catalog)
    out = []
    for key in keys:
        if element.properties.get(key) in (None, "", []):
            entry = schema.entry(key)
            out.append(GraphDiagnostic(
                element.id,
                f"The {element.kind.display} element has no {key} set.",
                entry.help_text if entry else f"Set {key} in the properties panel.",
            ))
    return out


def _connected(graph: QueryGraph, element: CanvasElement) -> bool:
    return bool(graph.targets_of(element.id))


def _check_table(graph, element, catalog):
    diagnostics = _missing(graph, element, catalog, ["table_name"])
    name = element.properties.get("table_name")
    if name and catalog.resolve_table(str(name)) is None:
        diagnostics.append(GraphDiagnostic(
            element.id,
            f'The table "{name}" no longer exists in the catalog.',
            "Pick one of the current tables in the properties panel.",
        ))
    if not _connected(graph, element):
        diagnostics.append(GraphDiagnostic(
            element.id,
            "This TABLE element is not connected to anything.",
            "Connect it to the SELECT element, or to a JOIN element.",
        ))
    return diagnostics


def _check_select(graph, element, catalog):
    diagnostics = _missing(graph, element, catalog, ["columns"])
    chosen = element.properties.get("columns") or []
    available = scope_columns(scope_tables(graph, element.id, catalog))
    gone = [name for name in chosen if name != "*" and name not in available]
    if gone:
        diagnostics.append(GraphDiagnostic(
            element.id,
            f"Selected columns are not available any more: {', '.join(gone)}.",
            "Re-pick the output columns in the properties panel.",
        ))
    return diagnostics


def _check_where(graph, element, catalog):
    diagnostics = []
    if not _connected(graph, element):
        diagnostics.append(GraphDiagnostic(
            element.id,
            "This WHERE element is not connected to the SELECT element.",
            "Connect it to SELECT so the filter applies to the query.",
        ))
    diagnostics.extend(_missing(graph, element, catalog, ["column", "operator", "value"]))
    diagnostics.extend(_stale_column(graph, element, catalog, element.properties.get("column")))
    return diagnostics


def _check_group_by(graph, element, catalog):
    diagnostics = []
    if not _connected(graph, element):
        diagnostics.append(GraphDiagnostic(
            element.id,
            "This GROUP BY element is not connected to the SELECT element.",
            "Connect it to SELECT so the grouping applies to the query.",
        ))
    diagnostics.extend(_missing(graph, element, catalog, ["columns"]))
    for name in element.properties.get("columns") or []:
        diagnostics.extend(_stale_column(graph, element, catalog, name))
    return diagnostics


def _check_having(graph, element, catalog):
    diagnostics = []
    if not _connected(graph, element):
        diagnostics.append(GraphDiagnostic(
            element.id,
            "HAVING requires GROUP BY: this element is not connected to one.",
            "Connect the HAVING element to a GROUP BY element; HAVING filters "
            "the groups it builds.",
        ))
    diagnostics.extend(
        _missing(graph, element, catalog, ["function", "column", "operator", "value"])
    )
    function = element.properties.get("function")
    column = element.properties.get("column")
    if column == "*" and function not in (None, "count"):
        diagnostics.append(GraphDiagnostic(
            element.id,
            f"{function}(*) is not meaningful; * only works with count.",
            "Count whole rows with count(*), or pick a column to aggregate.",
        ))
    if column and column != "*":
        diagnostics.extend(_stale_column(graph, element, catalog, column))
    return diagnostics


def _check_order_by(graph, element, catalog):
    diagnostics = []
    if not _connected(graph, element):
        diagnostics.append(GraphDiagnostic(
            element.id,
            "This ORDER BY element is not connected to the SELECT element.",
            "Connect it to SELECT so the sort applies to the query.",
        ))
    diagnostics.extend(_missing(graph, element, catalog, ["column"]))
    column = element.properties.get("column")
    if column:
        diagnostics.extend(_stale_column(graph, element, catalog, column))
        grouped = _grouped_columns(graph)
        if grouped is not None and column not in grouped:
            diagnostics.append(GraphDiagnostic(
                element.id,
                f'The query groups rows, but the sort column "{column}" is not '
                "one of the grouped columns.",
                "Sort by one of the grouped columns, or remove the GROUP BY element.",
            ))
    return diagnostics


def _check_join(graph, element, catalog):
    diagnostics = []
    tables = [
        source for source in graph.sources_of(element.id)
        if source.kind is ElementKind.TABLE
    ]
    if len(tables) != 2:
        diagnostics.append(GraphDiagnostic(
            element.id,
            f"A JOIN needs exactly two tables connected; this one has {len(tables)}.",
            "Connect two TABLE elements to the JOIN element.",
        ))
    if not _connected(graph, element):
        diagnostics.append(GraphDiagnostic(
            element.id,
            "This JOIN element is not connected to the SELECT element.",
            "Connect it to SELECT so the joined rows feed the query.",
        ))
    diagnostics.extend(_missing(graph, element, catalog, ["left_column", "right_column"]))
    return diagnostics


def _stale_column(graph, element, catalog, column):
    """Flag stored column choices the current scope no longer offers."""
    if not column:
        return []
    schema = property_schema_for(graph, element.id, catalog)
    entry = schema.entry("column") or schema.entry("columns")
    if entry is None or not entry.allowed:
        return []
    allowed = set(entry.allowed)
    if column in allowed:
        return []
    return [GraphDiagnostic(
        element.id,
        f'The column "{column}" is not available for this element any more.',
        "Pick one of the currently available columns in the properties panel.",
    )]


def _grouped_columns(graph: QueryGraph) -> set[str] | None:
    """Union of all connected GROUP BY columns, or None when nothing groups."""
    grouped: set[str] = set()
    seen_any = False
    for element in graph.elements_in_order():
        if element.kind is ElementKind.GROUP_BY and graph.targets_of(element.id):
            seen_any = True
            grouped.update(element.properties.get("columns") or [])
    return grouped if seen_any else None


_CHECKERS = {
    ElementKind.TABLE: _check_table,
    ElementKind.SELECT: _check_select,
    ElementKind.WHERE: _check_where,
    ElementKind.GROUP_BY: _check_group_by,
    ElementKind.HAVING: _check_having,
    ElementKind.ORDER_BY: _check_order_by,
    ElementKind.JOIN: _check_join,
}
