"""Per-element property schemas, computed from connections and the catalog.

An element only offers properties it can currently hold: a SELECT element
lists columns once a table feeds it, an ORDER BY element offers no sort
column until it is connected, a JOIN element needs both of its tables
before the join columns appear. Schemas depend only on (graph, element,
catalog), never on other property values, so they can be recomputed at
any time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from pgstudio.catalog.model import SchemaCatalog, TableDef
from pgstudio.graph.errors import IllegalValue, UnknownProperty
from pgstudio.graph.model import CanvasElement, ElementKind, QueryGraph
from pgstudio.sqlast.nodes import ColumnRef, Constant, Expr

COMPARISON_CHOICES = ("=", "<>", "<", "<=", ">", ">=")
AGGREGATE_CHOICES = ("count", "sum", "avg", "min", "max")
DIRECTION_CHOICES = ("ascending", "descending")


@dataclass(frozen=True)
class PropertyEntry:
    key: str
    value_kind: str  # choice | multi_choice | text | flag
    allowed: tuple[str, ...]
    required: bool
    help_text: str


@dataclass(frozen=True)
class PropertySchema:
    element_id: str
    entries: tuple[PropertyEntry, ...]

    def entry(self, key: str) -> PropertyEntry | None:
        for entry in self.entries:
            if entry.key == key:
                return entry
        return None


def scope_tables(
    graph: QueryGraph, select_id: str, catalog: SchemaCatalog
) -> list[tuple[str, TableDef]]:
    """Tables feeding a SELECT element (directly or through a JOIN), in drop order."""
    tables: list[tuple[str, TableDef]] = []
    for element in graph.sources_of(select_id):
        if element.kind is ElementKind.TABLE:
            resolved = _resolve(element, catalog)
            if resolved is not None:
                tables.append(resolved)
        elif element.kind is ElementKind.JOIN:
            for table_element in graph.sources_of(element.id):
                if table_element.kind is ElementKind.TABLE:
                    resolved = _resolve(table_element, catalog)
                    if resolved is not None:
                        tables.append(resolved)
    return tables


def _resolve(element: CanvasElement, catalog: SchemaCatalog) -> tuple[str, TableDef] | None:
    name = element.properties.get("table_name")
    if not name:
        return None
    table = catalog.resolve_table(str(name))
    if table is None:
        return None
    return (str(name), table)


def scope_columns(tables: list[tuple[str, TableDef]]) -> tuple[str, ...]:
    """Column choices: bare for a single table, qualified once two tables meet."""
    if len(tables) == 1:
        return tuple(tables[0][1].column_names())
    columns: list[str] = []
    for name, table in tables:
        columns.extend(f"{name}.{column}" for column in table.column_names())
    return tuple(columns)


def _select_of(graph: QueryGraph, element_id: str) -> str | None:
    for target in graph.targets_of(element_id):
        if target.kind is ElementKind.SELECT:
            return target.id
    return None


def _columns_in_scope(
    graph: QueryGraph, element: CanvasElement, catalog: SchemaCatalog
) -> tuple[str, ...]:
    """Column choices visible to a clause element, through its SELECT."""
    if element.kind is ElementKind.HAVING:
        for target in graph.targets_of(element.id):
            if target.kind is ElementKind.GROUP_BY:
                return _columns_in_scope(graph, target, catalog)
        return ()
    select_id = _select_of(graph, element.id)
    if select_id is None:
        return ()
    return scope_columns(scope_tables(graph, select_id, catalog))


CONNECT_FIRST = {
    ElementKind.SELECT: "Connect a TABLE element to this SELECT first; its columns will appear here.",
    ElementKind.WHERE: "Connect this WHERE to the SELECT element first; the filterable columns will appear here.",
    ElementKind.GROUP_BY: "Connect this GROUP BY to the SELECT element first; the groupable columns will appear here.",
    ElementKind.ORDER_BY: "Connect this ORDER BY to the SELECT element first; the sortable columns will appear here.",
    ElementKind.HAVING: "Connect this HAVING to a GROUP BY element first; the columns will appear here.",
}


def property_schema_for(
    graph: QueryGraph, element_id: str, catalog: SchemaCatalog
) -> PropertySchema:
    element = graph.element(element_id)
    kind = element.kind

    if kind is ElementKind.TABLE:
        return PropertySchema(element_id, (
            PropertyEntry(
                "table_name", "choice", catalog.table_names(), True,
                "The table this element reads rows from.",
            ),
        ))

    if kind is ElementKind.SELECT:
        columns = scope_columns(scope_tables(graph, element_id, catalog))
        help_text = (
            "The columns the query returns. * means every column."
            if columns
            else CONNECT_FIRST[kind]
        )
        allowed = ("*",) + columns if columns else ()
        return PropertySchema(element_id, (
            PropertyEntry("columns", "multi_choice", allowed, True, help_text),
            PropertyEntry(
                "distinct", "flag", (), False,
                "Remove duplicate rows from the result before returning it.",
            ),
        ))

    if kind is ElementKind.WHERE:
        columns = _columns_in_scope(graph, element, catalog)
        help_text = "The column this filter tests." if columns else CONNECT_FIRST[kind]
        return PropertySchema(element_id, (
            PropertyEntry("column", "choice", columns, True, help_text),
            PropertyEntry(
                "operator", "choice", COMPARISON_CHOICES, True,
                "How to compare the column against the value.",
            ),
            PropertyEntry(
                "value", "text", (), True,
                "The value to compare against. Use quotes for text, "
                "plain digits for numbers, or another column name.",
            ),
        ))

    if kind is ElementKind.GROUP_BY:
        columns = _columns_in_scope(graph, element, catalog)
        help_text = (
            "Rows sharing the same values of these columns form one group."
            if columns
            else CONNECT_FIRST[kind]
        )
        return PropertySchema(element_id, (
            PropertyEntry("columns", "multi_choice", columns, True, help_text),
        ))

    if kind is ElementKind.HAVING:
        columns = _columns_in_scope(graph, element, catalog)
        column_help = (
            "The column the aggregate summarizes. * counts whole rows "
            "and works with count only."
            if columns
            else CONNECT_FIRST[kind]
        )
        return PropertySchema(element_id, (
            PropertyEntry(
                "function", "choice", AGGREGATE_CHOICES, True,
                "The aggregate used to test each group.",
            ),
            PropertyEntry(
                "column", "choice", (("*",) + columns) if columns else (), True, column_help,
            ),
            PropertyEntry(
                "operator", "choice", COMPARISON_CHOICES, True,
                "How to compare the aggregate against the value.",
            ),
            PropertyEntry(
                "value", "text", (), True,
                "The value each group's aggregate is compared against.",
            ),
        ))

    if kind is ElementKind.ORDER_BY:
        columns = _columns_in_scope(graph, element, catalog)
        help_text = "The column the results are sorted by." if columns else CONNECT_FIRST[kind]
        return PropertySchema(element_id, (
            PropertyEntry("column", "choice", columns, True, help_text),
            PropertyEntry(
                "direction", "choice", DIRECTION_CHOICES, False,
                "Sort ascending (the default) or descending.",
            ),
        ))

    # JOIN: the two connected tables contribute one column choice each
    left, right = _join_sides(graph, element, catalog)
    left_allowed = tuple(left[1].column_names()) if left else ()
    right_allowed = tuple(right[1].column_names()) if right else ()
    connect_help = (
        "Connect two TABLE elements to this JOIN first; their columns will appear here."
    )
    return PropertySchema(element_id, (
        PropertyEntry(
            "left_column", "choice", left_allowed, True,
            f"The matching column from {left[0]}." if left else connect_help,
        ),
        PropertyEntry(
            "right_column", "choice", right_allowed, True,
            f"The matching column from {right[0]}." if right else connect_help,
        ),
    ))


def _join_sides(
    graph: QueryGraph, element: CanvasElement, catalog: SchemaCatalog
) -> tuple[tuple[str, TableDef] | None, tuple[str, TableDef] | None]:
    tables = [
        source for source in graph.sources_of(element.id)
        if source.kind is ElementKind.TABLE
    ]
    resolved = [_resolve(table, catalog) for table in tables[:2]]
    left = resolved[0] if len(resolved) > 0 else None
    right = resolved[1] if len(resolved) > 1 else None
    return (left, right)


def set_property(
    graph: QueryGraph,
    element_id: str,
    key: str,
    value: object,
    catalog: SchemaCatalog,
) -> None:
    """Store a property value after checking it against the current schema."""
    element = graph.element(element_id)
    schema = property_schema_for(graph, element_id, catalog)
    entry = schema.entry(key)
    if entry is None:
        raise UnknownProperty(key, element.kind.display)

    if entry.value_kind == "choice":
        if not entry.allowed:
            raise IllegalValue(entry.help_text)
        if not isinstance(value, str) or value not in entry.allowed:
            raise IllegalValue(
                f"{value!r} is not a valid {key} here. "
                f"Allowed values: {', '.join(entry.allowed)}."
            )
    elif entry.value_kind == "multi_choice":
        if not entry.allowed:
            raise IllegalValue(entry.help_text)
        if (
            not isinstance(value, list)
            or not value
            or not all(isinstance(item, str) for item in value)
        ):
            raise IllegalValue(f"Pick at least one value for {key}.")
        unknown = [item for item in value if item not in entry.allowed]
        if unknown:
            raise IllegalValue(
                f"{', '.join(unknown)} not available for {key}. "
                f"Allowed values: {', '.join(entry.allowed)}."
            )
        if "*" in value and len(value) > 1:
            raise IllegalValue(
                "* already stands for every column; pick * alone or name "
                "specific columns."
            )
        if len(set(value)) != len(value):
            raise IllegalValue(f"Each column can appear only once in {key}.")
    elif entry.value_kind == "flag":
        if not isinstance(value, bool):
            raise IllegalValue(f"{key} is a yes/no switch; use true or false.")
    else:  # text
        if not isinstance(value, str) or not value.strip():
            raise IllegalValue(f"Enter a value for {key}.")

    element.properties[key] = value


_INTEGER = re.compile(r"-?\d+$")
_DECIMAL = re.compile(r"-?(\d+\.\d*|\.\d+)$")


def parse_value(text: str, columns: tuple[str, ...]) -> Expr:
    """Read a WHERE/HAVING value the way a novice would write it.

    Numbers stay numbers, quoted text is text, known column names become
    column references, and anything else is taken as literal text.
    """
    cleaned = text.strip()
    if _INTEGER.match(cleaned):
        return Constant(int(cleaned))
    if _DECIMAL.match(cleaned):
        return Constant(float(cleaned))
    if len(cleaned) >= 2 and cleaned.startswith("'") and cleaned.endswith("'"):
        return Constant(cleaned[1:-1].replace("''", "'"))
    lowered = cleaned.lower()
    if lowered == "true":
        return Constant(True)
    if lowered == "false":
        return Constant(False)
    if lowered == "null":
        return Constant(None)
    for column in columns:
        if column.lower() == lowered:
            return column_expr(column)
    return Constant(cleaned)


def column_expr(column: str) -> ColumnRef:
    """Turn a stored column choice ("name" or "table.name") into a reference."""
    if "." in column:
        table, name = column.split(".", 1)
        return ColumnRef(name, table=table)
    return ColumnRef(column)
