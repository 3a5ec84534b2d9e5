"""Structural normalization.

normalize() is the equality lens for round-trip guarantees: two trees that
render to the same canonical text normalize to the same tree. It flattens
AND/OR chains into left-associated spines, lowercases function names, and
recurses through subqueries, derived tables and set-operation branches.
Parenthesization never appears here because grouping lives in the tree
shape itself. Idempotent by construction.
"""

from __future__ import annotations

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


def _flatten(op: str, expr: Expr, out: list[Expr]) -> None:
    if isinstance(expr, BinaryOp) and expr.op == op:
        _flatten(op, expr.lhs, out)
        _flatten(op, expr.rhs, out)
    else:
        out.append(normalize_expr(expr))


def normalize_expr(expr: Expr) -> Expr:
    if isinstance(expr, BinaryOp):
        if expr.op in ("AND", "OR"):
            terms: list[Expr] = []
            _flatten(expr.op, expr, terms)
            result = terms[0]
            for term in terms[1:]:
                result = BinaryOp(expr.op, result, term)
            return result
        return BinaryOp(expr.op, normalize_expr(expr.lhs), normalize_expr(expr.rhs))
    if isinstance(expr, LogicalNot):
        return LogicalNot(normalize_expr(expr.operand))
    if isinstance(expr, FuncCall):
        return FuncCall(
            expr.name.lower(),
            args=tuple(normalize_expr(arg) for arg in expr.args),
            star=expr.star,
        )
    if isinstance(expr, RowConstructor):
        return RowConstructor(tuple(normalize_expr(item) for item in expr.items))
    if isinstance(expr, ScalarSubquery):
        return ScalarSubquery(normalize(expr.query))
    if isinstance(expr, (ColumnRef, Constant)):
        return expr
    raise TypeError(f"cannot normalize {type(expr).__name__}")


def _normalize_table_ref(ref: TableRef) -> TableRef:
    if isinstance(ref, DerivedTable):
        return DerivedTable(normalize(ref.query), ref.alias)
    if isinstance(ref, BaseTable):
        return ref
    raise TypeError(f"cannot normalize {type(ref).__name__}")


def normalize(query: SelectQuery) -> SelectQuery:
    select = query.select
    if not isinstance(select, Star):
        select = tuple(SelectItem(normalize_expr(i.expr), i.alias) for i in select)
    return SelectQuery(
        select=select,
        from_table=None if query.from_table is None else _normalize_table_ref(query.from_table),
        joins=tuple(
            Join(_normalize_table_ref(j.table), normalize_expr(j.condition)) for j in query.joins
        ),
        where=None if query.where is None else normalize_expr(query.where),
        group_by=tuple(normalize_expr(e) for e in query.group_by),
        having=None if query.having is None else normalize_expr(query.having),
        order_by=tuple(OrderItem(normalize_expr(i.expr), i.descending) for i in query.order_by),
        distinct=query.distinct,
        set_op=None
        if query.set_op is None
        else SetOp(query.set_op.kind, normalize(query.set_op.query)),
    )
