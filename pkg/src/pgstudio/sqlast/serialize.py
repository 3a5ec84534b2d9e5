"""JSON-friendly encoding of query trees, used by the HTTP API."""

from __future__ import annotations

from typing import Any

from pgstudio.sqlast.nodes import (
    BaseTable,
    BinaryOp,
    ColumnRef,
    Constant,
    DerivedTable,
    Expr,
    FuncCall,
    Join,
    LogicalNot,
    OrderItem,
    RowConstructor,
    ScalarSubquery,
    SelectItem,
    SelectQuery,
    SetOp,
    Star,
    TableRef,
)


class MalformedQueryDocument(ValueError):
    pass


def expr_to_dict(expr: Expr) -> dict[str, Any]:
    if isinstance(expr, ColumnRef):
        return {"node": "column", "name": expr.name, "table": expr.table}
    if isinstance(expr, Constant):
        return {"node": "constant", "value": expr.value}
    if isinstance(expr, FuncCall):
        return {
            "node": "call",
            "name": expr.name,
            "args": [expr_to_dict(a) for a in expr.args],
            "star": expr.star,
        }
    if isinstance(expr, BinaryOp):
        return {
            "node": "binary",
            "op": expr.op,
            "lhs": expr_to_dict(expr.lhs),
            "rhs": expr_to_dict(expr.rhs),
        }
    if isinstance(expr, LogicalNot):
        return {"node": "not", "operand": expr_to_dict(expr.operand)}
    if isinstance(expr, RowConstructor):
        return {"node": "row", "items": [expr_to_dict(i) for i in expr.items]}
    if isinstance(expr, ScalarSubquery):
        return {"node": "subquery", "query": query_to_dict(expr.query)}
    raise MalformedQueryDocument(f"cannot encode {type(expr).__name__}")


def expr_from_dict(doc: dict[str, Any]) -> Expr:
    try:
        node = doc["node"]
        if node == "column":
            return ColumnRef(doc["name"], table=doc.get("table"))
        if node == "constant":
            return Constant(doc["value"])
        if node == "call":
            return FuncCall(
                doc["name"],
                args=tuple(expr_from_dict(a) for a in doc.get("args", [])),
                star=doc.get("star", False),
            )
        if node == "binary":
            return BinaryOp(doc["op"], expr_from_dict(doc["lhs"]), expr_from_dict(doc["rhs"]))
        if node == "not":
            return LogicalNot(expr_from_dict(doc["operand"]))
        if node == "row":
            return RowConstructor(tuple(expr_from_dict(i) for i in doc["items"]))
        if node == "subquery":
            return ScalarSubquery(query_from_dict(doc["query"]))
    except (KeyError, TypeError, ValueError) as error:
        raise MalformedQueryDocument(str(error)) from error
    raise MalformedQueryDocument(f"unknown expression node kind {node!r}")


def _table_ref_to_dict(ref: TableRef) -> dict[str, Any]:
    if isinstance(ref, BaseTable):
        return {"node": "table", "name": ref.name, "alias": ref.alias, "schema": ref.schema}
    if isinstance(ref, DerivedTable):
        return {"node": "derived", "query": query_to_dict(ref.query), "alias": ref.alias}
    raise MalformedQueryDocument(f"cannot encode {type(ref).__name__}")


def _table_ref_from_dict(doc: dict[str, Any]) -> TableRef:
    node = doc.get("node")
    if node == "table":
        return BaseTable(doc["name"], alias=doc.get("alias"), schema=doc.get("schema"))
    if node == "derived":
        return DerivedTable(query_from_dict(doc["query"]), doc["alias"])
    raise MalformedQueryDocument(f"unknown table reference kind {node!r}")


def query_to_dict(query: SelectQuery) -> dict[str, Any]:
    if isinstance(query.select, Star):
        select: Any = "*"
    else:
        select = [
            {"expr": expr_to_dict(item.expr), "alias": item.alias} for item in query.select
        ]
    return {
        "select": select,
        "distinct": query.distinct,
        "from": None if query.from_table is None else _table_ref_to_dict(query.from_table),
        "joins": [
            {"table": _table_ref_to_dict(j.table), "on": expr_to_dict(j.condition)}
            for j in query.joins
        ],
        "where": None if query.where is None else expr_to_dict(query.where),
        "group_by": [expr_to_dict(e) for e in query.group_by],
        "having": None if query.having is None else expr_to_dict(query.having),
        "order_by": [
            {"expr": expr_to_dict(i.expr), "descending": i.descending} for i in query.order_by
        ],
        "set_op": None
        if query.set_op is None
        else {"kind": query.set_op.kind, "query": query_to_dict(query.set_op.query)},
    }


def query_from_dict(doc: dict[str, Any]) -> SelectQuery:
    try:
        raw_select = doc.get("select", "*")
        if raw_select == "*":
            select: Any = Star()
        else:
            select = tuple(
                SelectItem(expr_from_dict(item["expr"]), item.get("alias"))
                for item in raw_select
            )
        set_op_doc = doc.get("set_op")
        return SelectQuery(
            select=select,
            distinct=doc.get("distinct", False),
            from_table=None if doc.get("from") is None else _table_ref_from_dict(doc["from"]),
            joins=tuple(
                Join(_table_ref_from_dict(j["table"]), expr_from_dict(j["on"]))
                for j in doc.get("joins", [])
            ),
            where=None if doc.get("where") is None else expr_from_dict(doc["where"]),
            group_by=tuple(expr_from_dict(e) for e in doc.get("group_by", [])),
            having=None if doc.get("having") is None else expr_from_dict(doc["having"]),
            order_by=tuple(
                OrderItem(expr_from_dict(i["expr"]), i.get("descending", False))
                for i in doc.get("order_by", [])
            ),
            set_op=None
            if set_op_doc is None
            else SetOp(set_op_doc["kind"], query_from_dict(set_op_doc["query"])),
        )
    except (KeyError, TypeError) as error:
        raise MalformedQueryDocument(str(error)) from error
