"""Canonical SQL rendering.

One line, uppercase keywords, single spaces, terminating semicolon.
Rendering the same tree twice yields byte-identical text, and the result
always reparses to the normalized form of the input tree.

Besides the text, render_select reports where each top-level clause landed
(clause_spans), which is what editors and the advisor use to point at
things without re-lexing.
"""

from __future__ import annotations

from dataclasses import dataclass

from pgstudio.sqlast.nodes import (
    AGGREGATE_FUNCTIONS,
    BaseTable,
    BinaryOp,
    ColumnRef,
    Constant,
    DerivedTable,
    Expr,
    FuncCall,
    LogicalNot,
    RowConstructor,
    ScalarSubquery,
    SelectQuery,
    Star,
    TableRef,
    query_violations,
    set_op_chain,
)
from pgstudio.sqlast.tokens import KEYWORDS


class InvalidAst(ValueError):
    """Raised when asked to render a structurally broken tree."""

    def __init__(self, violations: list[str]) -> None:
        super().__init__("; ".join(violations))
        self.violations = violations


@dataclass(frozen=True)
class CanonicalSql:
    text: str
    clause_spans: dict[str, tuple[int, int]]


# Binding strength, loosest first. Used to decide where parentheses are
# unavoidable; chains of equal strength render flat because the parser
# rebuilds them left associatively.
_PRECEDENCE = {
    "OR": 1,
    "AND": 2,
    # NOT sits at 3
    "=": 4, "<>": 4, "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5, "|": 5, "#": 5,
    "*": 6, "/": 6, "%": 6, "&": 6, "<<": 6, ">>": 6,
}

_NOT_PRECEDENCE = 3


def _ident_needs_quotes(name: str) -> bool:
    if not name:
        return True
    if name.lower() in KEYWORDS:
        return True
    first = name[0]
    if not (first.isalpha() and first == first.lower() or first == "_"):
        return True
    for ch in name:
        if not ((ch.isalpha() and ch == ch.lower()) or ch.isdigit() or ch == "_"):
            return True
    return False


def render_ident(name: str) -> str:
    """Quote only when the name would not survive a bare round trip."""
    if _ident_needs_quotes(name):
        return '"' + name.replace('"', '""') + '"'
    return name


def render_constant(value) -> str:
    if value is None:
        return "NULL"
    if value is True:
        return "TRUE"
    if value is False:
        return "FALSE"
    if isinstance(value, str):
        return "'" + value.replace("'", "''") + "'"
    return repr(value)


def render_expr(expr: Expr, parent_precedence: int = 0) -> str:
    if isinstance(expr, Constant):
        return render_constant(expr.value)
    if isinstance(expr, ColumnRef):
        if expr.table:
            return f"{render_ident(expr.table)}.{render_ident(expr.name)}"
        return render_ident(expr.name)
    if isinstance(expr, FuncCall):
        name = expr.name.upper() if expr.name in AGGREGATE_FUNCTIONS else render_ident(expr.name)
        if expr.star:
            return f"{name}(*)"
        args = ", ".join(render_expr(arg) for arg in expr.args)
        return f"{name}({args})"
    if isinstance(expr, BinaryOp):
        precedence = _PRECEDENCE[expr.op]
        # Left child may share our precedence (left associativity); the
        # right child at equal precedence needs parens to keep its grouping.
        left = render_expr(expr.lhs, precedence)
        right = render_expr(expr.rhs, precedence + 1)
        text = f"{left} {expr.op} {right}"
        if precedence < parent_precedence:
            return f"({text})"
        return text
    if isinstance(expr, LogicalNot):
        inner = render_expr(expr.operand, _NOT_PRECEDENCE)
        text = f"NOT {inner}"
        if _NOT_PRECEDENCE < parent_precedence:
            return f"({text})"
        return text
    if isinstance(expr, RowConstructor):
        return "(" + ", ".join(render_expr(item) for item in expr.items) + ")"
    if isinstance(expr, ScalarSubquery):
        violations = query_violations(expr.query)
        if violations:
            raise InvalidAst(violations)
        return "(" + _render_query_text(expr.query) + ")"
    raise InvalidAst([f"unknown expression node {type(expr).__name__}"])


def _render_table_ref(ref: TableRef) -> str:
    if isinstance(ref, BaseTable):
        name = render_ident(ref.name)
        if ref.schema:
            name = f"{render_ident(ref.schema)}.{name}"
        if ref.alias:
            return f"{name} AS {render_ident(ref.alias)}"
        return name
    if isinstance(ref, DerivedTable):
        return f"({_render_query_text(ref.query)}) AS {render_ident(ref.alias)}"
    raise InvalidAst([f"unknown table reference {type(ref).__name__}"])


def _render_core(query: SelectQuery, spans: dict[str, tuple[int, int]] | None, offset: int) -> str:
    """Render one branch, optionally recording clause spans (head branch only)."""
    parts: list[str] = []
    position = offset

    def emit(clause: str | None, text: str) -> None:
        nonlocal position
        if parts:
            position += 1  # the joining space
        if spans is not None and clause is not None:
            spans[clause] = (position, position + len(text))
        parts.append(text)
        position += len(text)

    select_words = "SELECT DISTINCT" if query.distinct else "SELECT"
    if isinstance(query.select, Star):
        select_text = f"{select_words} *"
    else:
        items = []
        for item in query.select:
            rendered = render_expr(item.expr)
            if item.alias:
                rendered += f" AS {render_ident(item.alias)}"
            items.append(rendered)
        select_text = f"{select_words} " + ", ".join(items)
    emit("SELECT", select_text)

    if query.from_table is not None:
        from_parts = [f"FROM {_render_table_ref(query.from_table)}"]
        for join in query.joins:
            from_parts.append(
                f"INNER JOIN {_render_table_ref(join.table)} ON {render_expr(join.condition)}"
            )
        emit("FROM", " ".join(from_parts))

    if query.where is not None:
        emit("WHERE", f"WHERE {render_expr(query.where)}")

    if query.group_by:
        emit("GROUP BY", "GROUP BY " + ", ".join(render_expr(e) for e in query.group_by))

    if query.having is not None:
        emit("HAVING", f"HAVING {render_expr(query.having)}")

    return " ".join(parts)


def _render_query_text(query: SelectQuery) -> str:
    """Plain text of a whole query (set chain and trailing ORDER BY), no spans."""
    return _render_query(query, None)[0]


def _render_query(
    query: SelectQuery, spans: dict[str, tuple[int, int]] | None
) -> tuple[str, dict[str, tuple[int, int]]]:
    recorded: dict[str, tuple[int, int]] = {} if spans is None else spans
    chain = set_op_chain(query)
    pieces: list[str] = []
    position = 0
    for index, (op, branch) in enumerate(chain):
        if op is not None:
            op_start = position + 1
            if index == 1 and spans is not None:
                recorded[op] = (op_start, op_start + len(op))
            pieces.append(op)
            position = op_start + len(op)
        branch_spans = recorded if (index == 0 and spans is not None) else None
        start = position + 1 if pieces else 0
        text = _render_core(branch, branch_spans, start)
        pieces.append(text)
        position = start + len(text)

    if query.order_by:
        order_text = "ORDER BY " + ", ".join(
            render_expr(item.expr) + (" DESC" if item.descending else "")
            for item in query.order_by
        )
        order_start = position + 1
        if spans is not None:
            recorded["ORDER BY"] = (order_start, order_start + len(order_text))
        pieces.append(order_text)
        position = order_start + len(order_text)

    return " ".join(pieces), recorded


def render_select(query: SelectQuery) -> CanonicalSql:
    """Render to canonical text. Raises InvalidAst if the tree is malformed."""
    violations = query_violations(query)
    if violations:
        raise InvalidAst(violations)
    spans: dict[str, tuple[int, int]] = {}
    text, spans = _render_query(query, spans)
    text += ";"
    return CanonicalSql(text=text, clause_spans=spans)
