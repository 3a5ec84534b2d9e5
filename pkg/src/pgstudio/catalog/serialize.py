"""Catalog <-> plain-dict encoding for project persistence and the API."""

from __future__ import annotations

from typing import Any

from pgstudio.catalog.model import (
    ColumnDef,
    ConstraintDef,
    ConstraintKind,
    DatabaseDef,
    IndexColumn,
    IndexDef,
    IndexMethod,
    SchemaCatalog,
    TableDef,
    TriggerDef,
    TriggerEvent,
    TriggerTiming,
)
from pgstudio.sqlast.serialize import expr_from_dict, expr_to_dict


def _constraint_to_dict(constraint: ConstraintDef) -> dict[str, Any]:
    return {
        "kind": constraint.kind.value,
        "columns": list(constraint.columns),
        "check_expression": None
        if constraint.check_expression is None
        else expr_to_dict(constraint.check_expression),
        "referenced_table": constraint.referenced_table,
        "referenced_columns": list(constraint.referenced_columns),
        "exclusion_operator": constraint.exclusion_operator,
    }


def _constraint_from_dict(doc: dict[str, Any]) -> ConstraintDef:
    return ConstraintDef(
        kind=ConstraintKind(doc["kind"]),
        columns=tuple(doc.get("columns", [])),
        check_expression=None
        if doc.get("check_expression") is None
        else expr_from_dict(doc["check_expression"]),
        referenced_table=doc.get("referenced_table"),
        referenced_columns=tuple(doc.get("referenced_columns", [])),
        exclusion_operator=doc.get("exclusion_operator"),
    )


def database_to_dict(database: DatabaseDef) -> dict[str, Any]:
    return {
        "name": database.name,
        "owner": database.owner,
        "template": database.template,
        "lc_collate": database.lc_collate,
        "lc_ctype": database.lc_ctype,
        "connection_limit": database.connection_limit,
        "description": database.description,
    }


def database_from_dict(doc: dict[str, Any]) -> DatabaseDef:
    return DatabaseDef(
        name=doc["name"],
        owner=doc.get("owner"),
        template=doc.get("template"),
        lc_collate=doc.get("lc_collate"),
        lc_ctype=doc.get("lc_ctype"),
        connection_limit=doc.get("connection_limit", -1),
        description=doc.get("description"),
    )


def table_to_dict(table: TableDef) -> dict[str, Any]:
    return {
        "name": table.name,
        "schema": table.schema,
        "description": table.description,
        "columns": [
            {
                "name": c.name,
                "data_type": c.data_type,
                "constraints": [_constraint_to_dict(x) for x in c.constraints],
            }
            for c in table.columns
        ],
        "constraints": [_constraint_to_dict(x) for x in table.constraints],
    }


def table_from_dict(doc: dict[str, Any]) -> TableDef:
    return TableDef(
        name=doc["name"],
        schema=doc.get("schema", "public"),
        description=doc.get("description"),
        columns=tuple(
            ColumnDef(
                name=c["name"],
                data_type=c["data_type"],
                constraints=tuple(
                    _constraint_from_dict(x) for x in c.get("constraints", [])
                ),
            )
            for c in doc.get("columns", [])
        ),
        constraints=tuple(_constraint_from_dict(x) for x in doc.get("constraints", [])),
    )


def index_to_dict(index: IndexDef) -> dict[str, Any]:
    return {
        "name": index.name,
        "table": index.table,
        "method": index.method.value,
        "unique": index.unique,
        "columns": [{"name": c.name, "descending": c.descending} for c in index.columns],
    }


def index_from_dict(doc: dict[str, Any]) -> IndexDef:
    return IndexDef(
        name=doc["name"],
        table=doc["table"],
        method=IndexMethod(doc.get("method", "btree")),
        unique=doc.get("unique", False),
        columns=tuple(
            IndexColumn(c["name"], c.get("descending", False))
            for c in doc.get("columns", [])
        ),
    )


def trigger_to_dict(trigger: TriggerDef) -> dict[str, Any]:
    return {
        "name": trigger.name,
        "timing": trigger.timing.value,
        "event": trigger.event.value,
        "target": trigger.target,
        "function_name": trigger.function_name,
        "target_is_view": trigger.target_is_view,
    }


def trigger_from_dict(doc: dict[str, Any]) -> TriggerDef:
    return TriggerDef(
        name=doc["name"],
        timing=TriggerTiming(doc["timing"]),
        event=TriggerEvent(doc["event"]),
        target=doc["target"],
        function_name=doc["function_name"],
        target_is_view=doc.get("target_is_view", False),
    )


def catalog_to_dict(catalog: SchemaCatalog) -> dict[str, Any]:
    return {
        "databases": [database_to_dict(d) for _, d in sorted(catalog.databases.items())],
        "schemas": sorted(catalog.schemas),
        "tables": [table_to_dict(t) for _, t in sorted(catalog.tables.items())],
        "indexes": [index_to_dict(i) for _, i in sorted(catalog.indexes.items())],
        "triggers": [trigger_to_dict(t) for _, t in sorted(catalog.triggers.items())],
    }


def catalog_from_dict(doc: dict[str, Any]) -> SchemaCatalog:
    catalog = SchemaCatalog()
    for d in doc.get("databases", []):
        catalog.databases[d["name"].lower()] = database_from_dict(d)
    catalog.schemas = set(doc.get("schemas", ["public"]))
    for t in doc.get("tables", []):
        table = table_from_dict(t)
        catalog.tables[table.key] = table
    for i in doc.get("indexes", []):
        catalog.indexes[i["name"].lower()] = index_from_dict(i)
    for t in doc.get("triggers", []):
        catalog.triggers[t["name"].lower()] = trigger_from_dict(t)
    return catalog
