"""Bag-semantics evaluator for the SELECT subset.

This is the ground truth the advisor's rewrites are checked against, so it
follows SQL semantics with some care:

- three-valued logic: comparisons against NULL yield unknown, and WHERE,
  HAVING and ON keep only rows where the condition is definitely true
- aggregates ignore NULLs, except COUNT(*) which counts rows
- an aggregate query with no GROUP BY produces exactly one row, even over
  an empty table
- integer division and modulo truncate toward zero, as PostgreSQL does
- UNION removes duplicate rows, UNION ALL keeps them
- a scalar subquery must yield at most one row; zero rows read as NULL

Everything is computed on lists of tuples; tables here are 20 rows, not 20
million.
"""

from __future__ import annotations

from typing import Any

from pgstudio.minidb.relation import MiniDb, Relation
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
    contains_aggregate,
    set_op_chain,
)
from pgstudio.sqlast.normalize import normalize_expr


class EvalError(Exception):
    pass


class UnknownTable(EvalError):
    def __init__(self, name: str) -> None:
        super().__init__(f"no table named {name!r} is loaded")
        self.name = name


class UnknownColumn(EvalError):
    def __init__(self, name: str) -> None:
        super().__init__(f"no column named {name!r} is in scope")
        self.name = name


class AmbiguousColumn(EvalError):
    def __init__(self, name: str) -> None:
        super().__init__(f"column {name!r} exists in more than one table; qualify it")
        self.name = name


class TypeMismatch(EvalError):
    pass


class NotGrouped(EvalError):
    def __init__(self, name: str) -> None:
        super().__init__(f"column {name!r} must appear in GROUP BY or inside an aggregate")
        self.name = name


class SubqueryCardinality(EvalError):
    def __init__(self) -> None:
        super().__init__("a subquery used as a value returned more than one row")


class DivisionByZero(EvalError):
    def __init__(self) -> None:
        super().__init__("division by zero")


_AMBIGUOUS = object()


def eval_select(query: SelectQuery, db: MiniDb) -> Relation:
    from dataclasses import replace

    chain = set_op_chain(query)
    if len(chain) == 1:
        return _eval_core(chain[0][1], db)

    # Set chains: branches evaluate without ordering; the trailing ORDER BY
    # applies to the combined rows and may only name output columns.
    result = _eval_core(replace(chain[0][1], order_by=()), db)
    for op, branch in chain[1:]:
        rhs = _eval_core(branch, db)
        if len(rhs.columns) != len(result.columns):
            raise TypeMismatch(
                f"{op} sides have {len(result.columns)} and {len(rhs.columns)} columns"
            )
        combined = result.rows + rhs.rows
        if op == "UNION":
            combined = _dedupe(combined)
        result = Relation(result.columns, combined)

    if query.order_by:
        result = _order_output(result, query)
    return result


# --- FROM clause ---------------------------------------------------------------


def _table_relation(ref: TableRef, db: MiniDb) -> tuple[str, Relation]:
    if isinstance(ref, BaseTable):
        relation = db.table(ref.name)
        if relation is None:
            raise UnknownTable(ref.name)
        return (ref.alias or ref.name).lower(), relation
    if isinstance(ref, DerivedTable):
        return ref.alias.lower(), eval_select(ref.query, db)
    raise EvalError(f"unsupported FROM item {type(ref).__name__}")


class _Scope:
    """Which (table, column) pairs are visible in FROM order."""

    def __init__(self) -> None:
        self.sources: list[tuple[str, tuple[str, ...]]] = []

    def add(self, name: str, columns: tuple[str, ...]) -> None:
        if any(existing == name for existing, _ in self.sources):
            raise EvalError(
                f"the table name {name!r} is used more than once; alias one of them"
            )
        self.sources.append((name, tuple(c.lower() for c in columns)))

    def star_columns(self) -> list[tuple[str, str]]:
        out = []
        for name, columns in self.sources:
            for column in columns:
                out.append((name, column))
        return out


def _build_rows(query: SelectQuery, db: MiniDb) -> tuple[_Scope, list[dict]]:
    scope = _Scope()
    if query.from_table is None:
        return scope, [{}]

    name, relation = _table_relation(query.from_table, db)
    scope.add(name, relation.columns)
    seen_bare: dict[str, int] = {}
    for column in relation.columns:
        seen_bare[column.lower()] = 1

    envs: list[dict] = []
    for row in relation.rows:
        env: dict = {}
        for column, value in zip(relation.columns, row):
            env[f"{name}.{column.lower()}"] = value
            env[column.lower()] = value
        envs.append(env)

    evaluator = _Evaluator(db)
    for join in query.joins:
        join_name, join_relation = _table_relation(join.table, db)
        scope.add(join_name, join_relation.columns)
        next_envs: list[dict] = []
        for env in envs:
            for row in join_relation.rows:
                candidate = dict(env)
                for column, value in zip(join_relation.columns, row):
                    key = column.lower()
                    candidate[f"{join_name}.{key}"] = value
                    candidate[key] = _AMBIGUOUS if seen_bare.get(key) else value
                if evaluator.eval_row(join.condition, candidate) is True:
                    next_envs.append(candidate)
        for column in join_relation.columns:
            seen_bare[column.lower()] = seen_bare.get(column.lower(), 0) + 1
        envs = next_envs

    return scope, envs


# --- expression evaluation -------------------------------------------------------


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _category(value: Any) -> str:
    if isinstance(value, bool):
        return "boolean"
    if _is_number(value):
        return "number"
    if isinstance(value, str):
        return "text"
    if isinstance(value, tuple):
        return "row"
    raise TypeMismatch(f"unsupported value {value!r}")


def _compare(op: str, left: Any, right: Any):
    if left is None or right is None:
        return None
    if isinstance(left, tuple) or isinstance(right, tuple):
        return _compare_rows(op, left, right)
    if _category(left) != _category(right):
        raise TypeMismatch(
            f"cannot compare {_category(left)} with {_category(right)}"
        )
    if op == "=":
        return left == right
    if op == "<>":
        return left != right
    if op == "<":
        return left < right
    if op == "<=":
        return left <= right
    if op == ">":
        return left > right
    if op == ">=":
        return left >= right
    raise TypeMismatch(f"unknown comparison {op}")


def _compare_rows(op: str, left: Any, right: Any):
    if not (isinstance(left, tuple) and isinstance(right, tuple)):
        raise TypeMismatch("a row can only be compared with another row")
    if len(left) != len(right):
        raise TypeMismatch("row comparisons need the same number of items on both sides")
    if op not in ("=", "<>"):
        raise TypeMismatch("rows compare only with = and <>")
    # three-valued elementwise equality
    any_unknown = False
    any_false = False
    for l, r in zip(left, right):
        verdict = _compare("=", l, r)
        if verdict is None:
            any_unknown = True
        elif verdict is False:
            any_false = True
    equal = False if any_false else (None if any_unknown else True)
    if op == "=":
        return equal
    return None if equal is None else not equal


def _trunc_div(a, b):
    quotient = abs(a) // abs(b)
    return quotient if (a >= 0) == (b >= 0) else -quotient


def _arith(op: str, left: Any, right: Any):
    if left is None or right is None:
        return None
    if op in ("&", "|", "#", "<<", ">>"):
        if not (isinstance(left, int) and isinstance(right, int)) or isinstance(
            left, bool
        ) or isinstance(right, bool):
            raise TypeMismatch("bit operations need whole numbers")
        if op == "&":
            return left & right
        if op == "|":
            return left | right
        if op == "#":
            return left ^ right
        if op == "<<":
            return left << right
        return left >> right
    if not (_is_number(left) and _is_number(right)):
        raise TypeMismatch("arithmetic needs numbers on both sides")
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    if op == "/":
        if right == 0:
            raise DivisionByZero()
        if isinstance(left, int) and isinstance(right, int):
            return _trunc_div(left, right)
        return left / right
    if op == "%":
        if right == 0:
            raise DivisionByZero()
        if isinstance(left, int) and isinstance(right, int):
            return left - _trunc_div(left, right) * right
        raise TypeMismatch("the remainder operator needs whole numbers")
    raise TypeMismatch(f"unknown operator {op}")


def _logic_and(a, b):
    if a is False or b is False:
        return False
    if a is None or b is None:
        return None
    return True


def _logic_or(a, b):
    if a is True or b is True:
        return True
    if a is None or b is None:
        return None
    return False


def _as_condition(value: Any):
    if value is None or isinstance(value, bool):
        return value
    raise TypeMismatch("the condition must be true or false, not a number or text")


class _Evaluator:
    def __init__(self, db: MiniDb) -> None:
        self.db = db

    # row context: plain column lookup in an environment

    def eval_row(self, expr: Expr, env: dict) -> Any:
        if isinstance(expr, Constant):
            return expr.value
        if isinstance(expr, ColumnRef):
            return self._lookup(expr, env)
        if isinstance(expr, BinaryOp):
            return self._binary(expr, lambda e: self.eval_row(e, env))
        if isinstance(expr, LogicalNot):
            value = _as_condition(self.eval_row(expr.operand, env))
            return None if value is None else not value
        if isinstance(expr, FuncCall):
            if expr.name in AGGREGATE_FUNCTIONS:
                raise EvalError(
                    f"{expr.name.upper()} needs GROUP BY (or an aggregate query) around it"
                )
            raise EvalError(
                f"the function {expr.name!r} is not available in the sandbox evaluator"
            )
        if isinstance(expr, RowConstructor):
            return tuple(self.eval_row(item, env) for item in expr.items)
        if isinstance(expr, ScalarSubquery):
            return self._subquery_value(expr)
        raise EvalError(f"cannot evaluate {type(expr).__name__}")

    # group context: group keys and aggregates over member rows

    def eval_group(self, expr: Expr, key_values: dict, members: list[dict]) -> Any:
        marker = normalize_expr(expr)
        if marker in key_values:
            return key_values[marker]
        if isinstance(expr, Constant):
            return expr.value
        if isinstance(expr, FuncCall) and expr.name in AGGREGATE_FUNCTIONS:
            return self._aggregate(expr, members)
        if isinstance(expr, BinaryOp):
            return self._binary(expr, lambda e: self.eval_group(e, key_values, members))
        if isinstance(expr, LogicalNot):
            value = _as_condition(self.eval_group(expr.operand, key_values, members))
            return None if value is None else not value
        if isinstance(expr, RowConstructor):
            return tuple(self.eval_group(item, key_values, members) for item in expr.items)
        if isinstance(expr, ScalarSubquery):
            return self._subquery_value(expr)
        if isinstance(expr, ColumnRef):
            raise NotGrouped(expr.name)
        raise EvalError(f"cannot evaluate {type(expr).__name__}")

    def _binary(self, expr: BinaryOp, recurse) -> Any:
        if expr.op == "AND":
            return _logic_and(_as_condition(recurse(expr.lhs)), _as_condition(recurse(expr.rhs)))
        if expr.op == "OR":
            return _logic_or(_as_condition(recurse(expr.lhs)), _as_condition(recurse(expr.rhs)))
        left = recurse(expr.lhs)
        right = recurse(expr.rhs)
        if expr.op in ("=", "<>", "<", "<=", ">", ">="):
            return _compare(expr.op, left, right)
        return _arith(expr.op, left, right)

    def _lookup(self, ref: ColumnRef, env: dict) -> Any:
        key = f"{ref.table.lower()}.{ref.name.lower()}" if ref.table else ref.name.lower()
        if key not in env:
            raise UnknownColumn(key)
        value = env[key]
        if value is _AMBIGUOUS:
            raise AmbiguousColumn(ref.name)
        return value

    def _aggregate(self, call: FuncCall, members: list[dict]) -> Any:
        if call.star:
            return len(members)
        if len(call.args) != 1:
            raise EvalError(f"{call.name.upper()} takes exactly one argument")
        values = [self.eval_row(call.args[0], env) for env in members]
        values = [v for v in values if v is not None]
        if call.name == "count":
            return len(values)
        if not values:
            return None
        if call.name == "sum":
            return _numeric_fold(values, sum)
        if call.name == "avg":
            total = _numeric_fold(values, sum)
            return total / len(values)
        if call.name == "min":
            return _same_type_fold(values, min)
        if call.name == "max":
            return _same_type_fold(values, max)
        raise EvalError(f"unknown aggregate {call.name}")

    def _subquery_value(self, sub: ScalarSubquery) -> Any:
        relation = eval_select(sub.query, self.db)
        if len(relation.rows) > 1:
            raise SubqueryCardinality()
        arity = len(relation.columns)
        if not relation.rows:
            return None if arity == 1 else tuple([None] * arity)
        row = relation.rows[0]
        return row[0] if arity == 1 else tuple(row)


def _numeric_fold(values, fold):
    for v in values:
        if not _is_number(v):
            raise TypeMismatch("SUM and AVG need numeric values")
    return fold(values)


def _same_type_fold(values, fold):
    categories = {_category(v) for v in values}
    if len(categories) > 1:
        raise TypeMismatch("MIN and MAX need values of one type")
    return fold(values)


# --- core evaluation --------------------------------------------------------------


def _output_names(query: SelectQuery, scope: _Scope) -> list[str]:
    names: list[str] = []
    if isinstance(query.select, Star):
        star = scope.star_columns()
        bare = [c for _, c in star]
        for table, column in star:
            names.append(column if bare.count(column) == 1 else f"{table}.{column}")
    else:
        for item in query.select:
            if item.alias:
                names.append(item.alias)
            elif isinstance(item.expr, ColumnRef):
                names.append(item.expr.name)
            elif isinstance(item.expr, FuncCall):
                names.append(item.expr.name)
            else:
                names.append("?column?")
    unique: list[str] = []
    used: set[str] = set()
    for name in names:
        candidate = name
        suffix = 1
        while candidate in used:
            suffix += 1
            candidate = f"{name}_{suffix}"
        used.add(candidate)
        unique.append(candidate)
    return unique


def _star_values(env: dict, scope: _Scope) -> tuple:
    return tuple(env[f"{table}.{column}"] for table, column in scope.star_columns())


def _eval_core(query: SelectQuery, db: MiniDb) -> Relation:
    evaluator = _Evaluator(db)
    scope, envs = _build_rows(query, db)

    if query.where is not None:
        envs = [env for env in envs if evaluator.eval_row(query.where, env) is True]

    select_items = [] if isinstance(query.select, Star) else list(query.select)
    grouped = bool(query.group_by) or query.having is not None or any(
        contains_aggregate(item.expr) for item in select_items
    )

    columns = _output_names(query, scope)
    out_rows: list[tuple] = []
    order_contexts: list = []

    if not grouped:
        for env in envs:
            if isinstance(query.select, Star):
                out_rows.append(_star_values(env, scope))
            else:
                out_rows.append(
                    tuple(evaluator.eval_row(item.expr, env) for item in select_items)
                )
            order_contexts.append(env)
    else:
        if isinstance(query.select, Star):
            raise EvalError("SELECT * cannot be combined with GROUP BY or aggregates")
        group_keys = [normalize_expr(e) for e in query.group_by]
        groups: dict[tuple, list[dict]] = {}
        group_order: list[tuple] = []
        for env in envs:
            key = tuple(
                _hashable(evaluator.eval_row(e, env)) for e in query.group_by
            )
            if key not in groups:
                groups[key] = []
                group_order.append(key)
            groups[key].append(env)
        if not query.group_by and not groups:
            # aggregate query over no rows still yields one (empty) group
            groups[()] = []
            group_order.append(())

        for key in group_order:
            members = groups[key]
            key_values = {marker: _unhash(value) for marker, value in zip(group_keys, key)}
            if query.having is not None:
                verdict = _as_condition(
                    evaluator.eval_group(query.having, key_values, members)
                )
                if verdict is not True:
                    continue
            out_rows.append(
                tuple(
                    evaluator.eval_group(item.expr, key_values, members)
                    for item in select_items
                )
            )
            order_contexts.append((key_values, members))

    if query.distinct:
        deduped = []
        seen_keys = set()
        kept_contexts = []
        for row, context in zip(out_rows, order_contexts):
            key = tuple(_hashable(v) for v in row)
            if key in seen_keys:
                continue
            seen_keys.add(key)
            deduped.append(row)
            kept_contexts.append(context)
        out_rows, order_contexts = deduped, kept_contexts

    if query.order_by:
        out_rows = _sorted_rows(
            query, evaluator, columns, out_rows, order_contexts, grouped
        )

    return Relation(tuple(columns), out_rows)


def _hashable(value):
    if isinstance(value, tuple):
        return ("\x00row",) + tuple(_hashable(v) for v in value)
    return value


def _unhash(value):
    if isinstance(value, tuple) and value and value[0] == "\x00row":
        return tuple(_unhash(v) for v in value[1:])
    return value


def _sorted_rows(query, evaluator, columns, out_rows, order_contexts, grouped):
    pairs = list(zip(out_rows, order_contexts))

    def key_for(item: "OrderItem", pair):
        row, context = pair
        expr = item.expr
        # an output alias or column name wins over the source columns
        if isinstance(expr, ColumnRef) and expr.table is None:
            name = expr.name.lower()
            lowered = [c.lower() for c in columns]
            if name in lowered:
                return row[lowered.index(name)]
        if grouped:
            key_values, members = context
            return evaluator.eval_group(expr, key_values, members)
        return evaluator.eval_row(expr, context)

    for item in reversed(query.order_by):
        values = [key_for(item, pair) for pair in pairs]
        _check_sortable(values)
        decorated = list(zip(values, pairs))
        decorated.sort(
            key=lambda pair: ((pair[0] is None), _SortKey(pair[0])),
            reverse=item.descending,
        )
        pairs = [pair for _, pair in decorated]
    return [row for row, _ in pairs]


class _SortKey:
    """Total order wrapper; None sorts as the smallest value of its run."""

    __slots__ = ("value",)

    def __init__(self, value) -> None:
        self.value = value

    def __lt__(self, other: "_SortKey") -> bool:
        if self.value is None:
            return False
        if other.value is None:
            return True
        return self.value < other.value

    def __eq__(self, other) -> bool:
        return self.value == other.value


def _check_sortable(values) -> None:
    categories = {_category(v) for v in values if v is not None}
    if len(categories) > 1:
        raise TypeMismatch("ORDER BY values must share one type")


def _order_output(result: Relation, query: SelectQuery):
    lowered = [c.lower() for c in result.columns]

    keyed_rows = list(result.rows)
    for item in reversed(query.order_by):
        expr = item.expr
        if not (isinstance(expr, ColumnRef) and expr.table is None):
            raise EvalError("ORDER BY after UNION must name an output column")
        name = expr.name.lower()
        if name not in lowered:
            raise UnknownColumn(expr.name)
        index = lowered.index(name)
        values = [row[index] for row in keyed_rows]
        _check_sortable(values)
        keyed_rows.sort(
            key=lambda row: ((row[index] is None), _SortKey(row[index])),
            reverse=item.descending,
        )
    return Relation(result.columns, keyed_rows)


def _dedupe(rows: list[tuple]) -> list[tuple]:
    seen = set()
    out = []
    for row in rows:
        key = tuple(_hashable(v) for v in row)
        if key not in seen:
            seen.add(key)
            out.append(row)
    return out
