"""A deliberately small cost model for comparing predicate orderings.

The model exists to make one lesson visible: the same query can be executed
in several orders, and the orders differ in cost. It enumerates every
ordering of the WHERE conditions as a chain of Filter steps over a table
scan, prices each chain with fixed constants, and reports the cheapest plan
next to the alternatives. All numbers are estimates from these constants,
not measurements.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from pgstudio.advisor.errors import UnsupportedShape
from pgstudio.catalog.errors import UnknownTable
from pgstudio.catalog.model import SchemaCatalog
from pgstudio.sqlast.nodes import (
    BaseTable,
    BinaryOp,
    Expr,
    FuncCall,
    SelectQuery,
    Star,
    and_conjuncts,
    contains_subquery,
    walk_expr,
)
from pgstudio.sqlast.render import render_expr


@dataclass(frozen=True)
class TableStats:
    """Row count used when pricing scans of one table."""

    table: str
    row_count: int

    def __post_init__(self) -> None:
        if self.row_count < 0:
            raise ValueError("row_count must be zero or more")


@dataclass(frozen=True)
class CostModel:
    """The fixed constants of the toy model.

    A condition that calls a function (or runs a subquery) is priced ten
    times a plain comparison, equality keeps 10% of rows, other comparisons
    33%, everything else 50%. The time figures are linear scalings of cost
    and plan count so reports can show familiar units.
    """

    function_call_weight: float = 10.0
    plain_weight: float = 1.0
    equality_selectivity: float = 0.1
    comparison_selectivity: float = 0.33
    default_selectivity: float = 0.5
    join_weight: float = 1.0
    planning_ms_per_plan: float = 0.01
    execution_ms_per_cost: float = 0.001
    default_row_count: int = 1000


DEFAULT_COST_MODEL = CostModel()

_COMPARISON_OPS = {"=", "<>", "<", "<=", ">", ">="}


@dataclass(frozen=True)
class PlanNode:
    """One step of a plan tree; cost is this node's own work."""

    operator: str  # SeqScan | Filter | Project | NestedLoopJoin
    detail: str
    cost: float
    rows: float
    children: tuple["PlanNode", ...] = ()

    @property
    def total_cost(self) -> float:
        return self.cost + sum(child.total_cost for child in self.children)

    def lines(self, indent: int = 0) -> list[str]:
        pad = "  " * indent
        own = [f"{pad}{_DISPLAY_NAMES[self.operator]} {self.detail}  "
               f"(cost {self.cost:.2f}, rows out {self.rows:.0f})"]
        for child in self.children:
            own.extend(child.lines(indent + 1))
        return own


_DISPLAY_NAMES = {
    "SeqScan": "Seq Scan on",
    "Filter": "Filter:",
    "Project": "Output:",
    "NestedLoopJoin": "Nested Loop Join on",
}


@dataclass(frozen=True)
class PlanReport:
    """The cheapest plan plus every alternative ordering, priced."""

    plan: PlanNode
    estimated_cost: float
    estimated_planning_time_ms: float
    estimated_execution_time_ms: float
    alternatives: tuple[tuple[PlanNode, float], ...] = ()
    server_explain: str | None = None

    @property
    def plan_count(self) -> int:
        return 1 + len(self.alternatives)


def predicate_weight(predicate: Expr, model: CostModel = DEFAULT_COST_MODEL) -> float:
    """Per-row price of checking one condition."""
    if contains_subquery(predicate):
        return model.function_call_weight
    if any(isinstance(node, FuncCall) for node in walk_expr(predicate)):
        return model.function_call_weight
    return model.plain_weight


def predicate_selectivity(predicate: Expr, model: CostModel = DEFAULT_COST_MODEL) -> float:
    """Fraction of rows assumed to survive one condition."""
    if isinstance(predicate, BinaryOp):
        if predicate.op == "=":
            return model.equality_selectivity
        if predicate.op in _COMPARISON_OPS:
            return model.comparison_selectivity
    return model.default_selectivity


def plan(
    query: SelectQuery,
    catalog: SchemaCatalog | None,
    stats: object = (),
    model: CostModel = DEFAULT_COST_MODEL,
) -> PlanReport:
    """Price every WHERE ordering of a single-table or single-join query.

    stats may be a mapping of table name to TableStats or any iterable of
    TableStats; tables without stats fall back to the model's default row
    count.
    """
    row_counts = _row_counts(stats)
    source = _build_source(query, catalog, row_counts, model)

    conjuncts = and_conjuncts(query.where)
    output_detail = _output_detail(query)
    plans: list[PlanNode] = []
    orderings = permutations(range(len(conjuncts))) if conjuncts else [()]
    for ordering in orderings:
        node = source
        for index in ordering:
            predicate = conjuncts[index]
            node = PlanNode(
                operator="Filter",
                detail=render_expr(predicate),
                cost=node.rows * predicate_weight(predicate, model),
                rows=node.rows * predicate_selectivity(predicate, model),
                children=(node,),
            )
        plans.append(
            PlanNode(operator="Project", detail=output_detail, cost=0.0, rows=node.rows,
                     children=(node,))
        )

    ranked = sorted(enumerate(plans), key=lambda pair: (pair[1].total_cost, pair[0]))
    primary = ranked[0][1]
    alternatives = tuple((node, node.total_cost) for _, node in ranked[1:])
    return PlanReport(
        plan=primary,
        estimated_cost=primary.total_cost,
        estimated_planning_time_ms=len(plans) * model.planning_ms_per_plan,
        estimated_execution_time_ms=primary.total_cost * model.execution_ms_per_cost,
        alternatives=alternatives,
    )


def compare_plans(
    query: SelectQuery,
    catalog: SchemaCatalog | None,
    stats: object = (),
    model: CostModel = DEFAULT_COST_MODEL,
) -> str:
    """Human-readable comparison of the cheapest plan against the alternatives."""
    report = plan(query, catalog, stats, model)
    lines = [
        f"Compared {report.plan_count} possible "
        + ("plan." if report.plan_count == 1 else "plans."),
        f"Estimated planning time: {report.estimated_planning_time_ms:.2f} ms. "
        "All numbers are estimates from a fixed teaching model, not measurements.",
        "",
        f"Chosen plan  (estimated cost {report.estimated_cost:.2f}, "
        f"estimated execution time {report.estimated_execution_time_ms:.2f} ms)",
    ]
    lines.extend("  " + line for line in report.plan.lines())
    if not report.alternatives:
        lines.append("")
        lines.append("No alternative orderings: with at most one condition, "
                     "there is only one way to run this query.")
        return "\n".join(lines)
    for position, (alternative, cost) in enumerate(report.alternatives, start=1):
        ratio = cost / report.estimated_cost if report.estimated_cost else float("inf")
        lines.append("")
        lines.append(
            f"Alternative {position}  (estimated cost {cost:.2f}, "
            f"{ratio:.2f}x the chosen plan)"
        )
        lines.extend("  " + line for line in alternative.lines())
    return "\n".join(lines)


def _row_counts(stats: object) -> dict[str, int]:
    if isinstance(stats, dict):
        entries = list(stats.values())
    else:
        entries = list(stats)  # type: ignore[arg-type]
    counts: dict[str, int] = {}
    for entry in entries:
        counts[entry.table.lower()] = entry.row_count
    return counts


def _build_source(
    query: SelectQuery,
    catalog: SchemaCatalog | None,
    row_counts: dict[str, int],
    model: CostModel,
) -> PlanNode:
    """The scan (or scan-join-scan) feeding the filter chain."""
    if query.set_op is not None:
        raise UnsupportedShape("set operations such as UNION")
    if query.from_table is None:
        raise UnsupportedShape("queries without a FROM table")
    if len(query.joins) > 1:
        raise UnsupportedShape("more than one join")

    outer = _scan(query.from_table, catalog, row_counts, model)
    if not query.joins:
        return outer
    join = query.joins[0]
    inner = _scan(join.table, catalog, row_counts, model)
    pair_count = outer.rows * inner.rows
    return PlanNode(
        operator="NestedLoopJoin",
        detail=render_expr(join.condition),
        cost=pair_count * model.join_weight,
        rows=pair_count * predicate_selectivity(join.condition, model),
        children=(outer, inner),
    )


def _scan(
    ref: object,
    catalog: SchemaCatalog | None,
    row_counts: dict[str, int],
    model: CostModel,
) -> PlanNode:
    if not isinstance(ref, BaseTable):
        raise UnsupportedShape("subqueries in FROM")
    lookup = f"{ref.schema}.{ref.name}" if ref.schema else ref.name
    if catalog is not None and catalog.resolve_table(lookup) is None:
        raise UnknownTable(lookup)
    rows = float(row_counts.get(ref.name.lower(), model.default_row_count))
    return PlanNode(operator="SeqScan", detail=ref.name, cost=rows, rows=rows)


def _output_detail(query: SelectQuery) -> str:
    if isinstance(query.select, Star):
        return "*"
    parts = []
    for item in query.select:
        parts.append(item.alias if item.alias else render_expr(item.expr))
    return ", ".join(parts)
