"""DDL text rendering. Deterministic: same definition, same bytes.

Every renderer validates first and raises InvalidDefinition rather than
emit broken SQL.
"""

from __future__ import annotations

from pgstudio.catalog.errors import InvalidDefinition
from pgstudio.catalog.identifiers import validate_identifier
from pgstudio.catalog.model import (
    ColumnDef,
    ConstraintDef,
    ConstraintKind,
    DatabaseDef,
    IndexDef,
    SchemaCatalog,
    TableDef,
    TriggerDef,
    validate_database,
    validate_index,
    validate_table,
    validate_trigger,
)
from pgstudio.sqlast.render import render_expr, render_ident


def _quote_literal(value: str) -> str:
    return "'" + value.replace("'", "''") + "'"


def render_create_database(definition: DatabaseDef) -> str:
    result = validate_database(definition)
    if not result.ok:
        raise InvalidDefinition(result.violations)
    options: list[str] = []
    # Fixed option order keeps output stable no matter how the form was filled.
    if definition.template is not None:
        options.append(f"TEMPLATE = {render_ident(definition.template)}")
    if definition.owner is not None:
        options.append(f"OWNER = {render_ident(definition.owner)}")
    if definition.lc_collate is not None:
        options.append(f"LC_COLLATE = {_quote_literal(definition.lc_collate)}")
    if definition.lc_ctype is not None:
        options.append(f"LC_CTYPE = {_quote_literal(definition.lc_ctype)}")
    if definition.connection_limit != -1:
        options.append(f"CONNECTION LIMIT = {definition.connection_limit}")
    sql = f"CREATE DATABASE {render_ident(definition.name)}"
    if options:
        sql += " WITH " + " ".join(options)
    return sql + ";"


def render_create_schema(name: str) -> str:
    result = validate_identifier(name, field="name")
    if not result.ok:
        raise InvalidDefinition(result.violations)
    return f"CREATE SCHEMA {render_ident(name)};"


def _render_column(column: ColumnDef) -> str:
    parts = [render_ident(column.name), column.data_type.strip().lower()]
    # Constraint order mirrors how people write them by hand.
    for kind in (ConstraintKind.NOT_NULL, ConstraintKind.UNIQUE):
        if column.has(kind):
            parts.append("NOT NULL" if kind is ConstraintKind.NOT_NULL else "UNIQUE")
    for constraint in column.constraints:
        if constraint.kind is ConstraintKind.CHECK and constraint.check_expression is not None:
            parts.append(f"CHECK ({render_expr(constraint.check_expression)})")
        elif constraint.kind is ConstraintKind.FOREIGN_KEY and constraint.referenced_table:
            clause = f"REFERENCES {render_ident(constraint.referenced_table)}"
            if constraint.referenced_columns:
                cols = ", ".join(render_ident(c) for c in constraint.referenced_columns)
                clause += f" ({cols})"
            parts.append(clause)
    return " ".join(parts)


def _render_table_constraint(constraint: ConstraintDef) -> str:
    columns = ", ".join(render_ident(c) for c in constraint.columns)
    if constraint.kind is ConstraintKind.UNIQUE:
        return f"UNIQUE ({columns})"
    if constraint.kind is ConstraintKind.CHECK:
        return f"CHECK ({render_expr(constraint.check_expression)})"
    if constraint.kind is ConstraintKind.FOREIGN_KEY:
        clause = f"FOREIGN KEY ({columns}) REFERENCES {render_ident(constraint.referenced_table)}"
        if constraint.referenced_columns:
            refs = ", ".join(render_ident(c) for c in constraint.referenced_columns)
            clause += f" ({refs})"
        return clause
    if constraint.kind is ConstraintKind.EXCLUSION:
        entries = ", ".join(
            f"{render_ident(c)} WITH {constraint.exclusion_operator}" for c in constraint.columns
        )
        return f"EXCLUDE ({entries})"
    raise InvalidDefinition(())


def render_create_table(definition: TableDef, catalog: SchemaCatalog | None = None) -> str:
    result = validate_table(definition, catalog)
    if not result.ok:
        raise InvalidDefinition(result.violations)
    pieces = [_render_column(column) for column in definition.columns]
    pieces.extend(_render_table_constraint(c) for c in definition.constraints)
    qualified = f"{render_ident(definition.schema)}.{render_ident(definition.name)}"
    return f"CREATE TABLE {qualified} ({', '.join(pieces)});"


def render_create_index(definition: IndexDef, catalog: SchemaCatalog) -> str:
    result = validate_index(definition, catalog)
    if not result.ok:
        raise InvalidDefinition(result.violations)
    unique = "UNIQUE " if definition.unique else ""
    columns = ", ".join(
        render_ident(c.name) + (" DESC" if c.descending else "") for c in definition.columns
    )
    return (
        f"CREATE {unique}INDEX {render_ident(definition.name)} "
        f"ON {render_ident(definition.table)} "
        f"USING {definition.method.value} ({columns});"
    )


def render_create_trigger(definition: TriggerDef, catalog: SchemaCatalog | None = None) -> str:
    result = validate_trigger(definition, catalog)
    if not result.ok:
        raise InvalidDefinition(result.violations)
    return (
        f"CREATE TRIGGER {render_ident(definition.name)} "
        f"{definition.timing.value} {definition.event.value} "
        f"ON {render_ident(definition.target)} "
        f"FOR EACH ROW EXECUTE FUNCTION {render_ident(definition.function_name)}();"
    )
