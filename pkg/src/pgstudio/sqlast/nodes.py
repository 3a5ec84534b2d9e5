"""AST node types for the supported SELECT subset.

Every node is a frozen dataclass, so structural equality and hashing come
for free. That property is load bearing: query fingerprints, normalization
round trips and rewrite staleness checks all compare trees directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

ARITHMETIC_OPERATORS = frozenset({"+", "-", "*", "/", "%"})
COMPARISON_OPERATORS = frozenset({"=", "<>", "<", "<=", ">", ">="})
LOGICAL_OPERATORS = frozenset({"AND", "OR"})
BITWISE_OPERATORS = frozenset({"&", "|", "#", "<<", ">>"})

ALL_BINARY_OPERATORS = (
    ARITHMETIC_OPERATORS | COMPARISON_OPERATORS | LOGICAL_OPERATORS | BITWISE_OPERATORS
)

AGGREGATE_FUNCTIONS = frozenset({"count", "sum", "avg", "min", "max"})

Scalar = Union[int, float, str, bool, None]


class Expr:
    """Marker base class for expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class ColumnRef(Expr):
    """A column reference, optionally qualified with a table name or alias."""

    name: str
    table: str | None = None


@dataclass(frozen=True)
class Constant(Expr):
    """A literal value. NULL is represented as value None."""

    value: Scalar


@dataclass(frozen=True)
class FuncCall(Expr):
    """A function call. star=True models COUNT(*), which takes no arguments."""

    name: str
    args: tuple[Expr, ...] = ()
    star: bool = False

    def __post_init__(self) -> None:
        if self.star and self.args:
            raise ValueError("a star call cannot also have arguments")


@dataclass(frozen=True)
class BinaryOp(Expr):
    op: str
    lhs: Expr
    rhs: Expr

    def __post_init__(self) -> None:
        if self.op not in ALL_BINARY_OPERATORS:
            raise ValueError(f"unknown binary operator {self.op!r}")


@dataclass(frozen=True)
class LogicalNot(Expr):
    operand: Expr


@dataclass(frozen=True)
class RowConstructor(Expr):
    """A parenthesized value list, e.g. the (col2, col3) side of a row comparison."""

    items: tuple[Expr, ...]

    def __post_init__(self) -> None:
        if len(self.items) < 2:
            raise ValueError("a row constructor needs at least two items")


@dataclass(frozen=True)
class ScalarSubquery(Expr):
    """A parenthesized SELECT used as a value."""

    query: "SelectQuery"


@dataclass(frozen=True)
class Star:
    """The bare * select list."""


STAR = Star()


@dataclass(frozen=True)
class SelectItem:
    expr: Expr
    alias: str | None = None


class TableRef:
    """Marker base class for FROM items."""

    __slots__ = ()


@dataclass(frozen=True)
class BaseTable(TableRef):
    name: str
    alias: str | None = None
    schema: str | None = None


@dataclass(frozen=True)
class DerivedTable(TableRef):
    query: "SelectQuery"
    alias: str


@dataclass(frozen=True)
class Join:
    """An INNER JOIN arm with its ON condition."""

    table: TableRef
    condition: Expr


@dataclass(frozen=True)
class OrderItem:
    expr: Expr
    descending: bool = False


@dataclass(frozen=True)
class SetOp:
    """Link to the next branch of a UNION / UNION ALL chain.

    Chains read left to right: the head query's set_op holds the operator
    between the head and the second branch, whose own set_op holds the next
    operator, and so on. Consumers fold the flattened chain left to right.
    """

    kind: str  # "UNION" or "UNION ALL"
    query: "SelectQuery"

    def __post_init__(self) -> None:
        if self.kind not in ("UNION", "UNION ALL"):
            raise ValueError(f"unknown set operation {self.kind!r}")


@dataclass(frozen=True)
class SelectQuery:
    select: tuple[SelectItem, ...] | Star = STAR
    from_table: TableRef | None = None
    joins: tuple[Join, ...] = ()
    where: Expr | None = None
    group_by: tuple[Expr, ...] = ()
    having: Expr | None = None
    order_by: tuple[OrderItem, ...] = ()
    distinct: bool = False
    set_op: SetOp | None = None


def walk_expr(expr: Expr) -> Iterator[Expr]:
    """Yield expr and every expression nested inside it, subqueries excluded."""
    yield expr
    if isinstance(expr, BinaryOp):
        yield from walk_expr(expr.lhs)
        yield from walk_expr(expr.rhs)
    elif isinstance(expr, LogicalNot):
        yield from walk_expr(expr.operand)
    elif isinstance(expr, FuncCall):
        for arg in expr.args:
            yield from walk_expr(arg)
    elif isinstance(expr, RowConstructor):
        for item in expr.items:
            yield from walk_expr(item)


def contains_aggregate(expr: Expr) -> bool:
    return any(
        isinstance(node, FuncCall) and node.name in AGGREGATE_FUNCTIONS
        for node in walk_expr(expr)
    )


def contains_subquery(expr: Expr) -> bool:
    return any(isinstance(node, ScalarSubquery) for node in walk_expr(expr))


def and_conjuncts(expr: Expr | None) -> list[Expr]:
    """Flatten a tree of AND nodes into its conjuncts, in source order."""
    if expr is None:
        return []
    if isinstance(expr, BinaryOp) and expr.op == "AND":
        return and_conjuncts(expr.lhs) + and_conjuncts(expr.rhs)
    return [expr]


def and_join(conjuncts: list[Expr]) -> Expr | None:
    """Left-fold conjuncts back into an AND tree. Inverse of and_conjuncts."""
    if not conjuncts:
        return None
    result = conjuncts[0]
    for conjunct in conjuncts[1:]:
        result = BinaryOp("AND", result, conjunct)
    return result


def set_op_chain(query: SelectQuery) -> list[tuple[str | None, SelectQuery]]:
    """Flatten a set-operation chain into (operator-before-branch, branch) pairs.

    The first pair's operator is None. Branches are returned with their own
    set_op stripped so each stands alone as a plain SELECT.
    """
    chain: list[tuple[str | None, SelectQuery]] = []
    op: str | None = None
    current: SelectQuery | None = query
    while current is not None:
        link = current.set_op
        branch = (
            current if link is None else _replace_set_op(current, None)
        )
        chain.append((op, branch))
        if link is None:
            break
        op, current = link.kind, link.query
    return chain


def _replace_set_op(query: SelectQuery, set_op: SetOp | None) -> SelectQuery:
    from dataclasses import replace

    return replace(query, set_op=set_op)


def select_arity(query: SelectQuery) -> int | None:
    """Number of output columns, or None when a star makes it catalog-dependent."""
    if isinstance(query.select, Star):
        return None
    return len(query.select)


def query_violations(query: SelectQuery) -> list[str]:
    """Structural invariant violations, as human-readable strings.

    An empty list means the tree is well formed. Renderers refuse trees
    with violations; builders can call this to fail early.
    """
    problems: list[str] = []
    if not isinstance(query.select, Star) and not query.select:
        problems.append("the select list is empty")
    if query.having is not None and not query.group_by:
        select_items = [] if isinstance(query.select, Star) else list(query.select)
        if not any(contains_aggregate(item.expr) for item in select_items) and not contains_aggregate(
            query.having
        ):
            problems.append(
                "HAVING needs either a GROUP BY clause or an aggregate to act on"
            )
    if query.joins and query.from_table is None:
        problems.append("a JOIN needs a base table to join onto")
    for op, branch in set_op_chain(query)[1:]:
        left_arity = select_arity(query)
        right_arity = select_arity(branch)
        if left_arity is not None and right_arity is not None and left_arity != right_arity:
            problems.append(
                f"both sides of {op} must produce the same number of columns "
                f"({left_arity} vs {right_arity})"
            )
        if branch.order_by:
            problems.append(
                "ORDER BY applies to the combined result and belongs after the last branch"
            )
        problems.extend(query_violations(branch))
    return problems
