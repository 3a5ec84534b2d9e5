"""Detect-and-rewrite tips for common query anti-patterns.

Each detector inspects the top level of one SELECT statement and reports a
Diagnostic: where the problem sits in the canonical SQL text, a plain-language
explanation, an equivalence class, and (when it is safe to offer one) a
rewritten query. Rewrites are applied one at a time so the effect of each
change stays observable; apply_rewrite refuses diagnostics that were produced
for an earlier version of the query.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from enum import Enum

from pgstudio.advisor.errors import NoRewriteAvailable, StaleDiagnostic
from pgstudio.catalog.model import SchemaCatalog, TableDef
from pgstudio.sqlast.nodes import (
    AGGREGATE_FUNCTIONS,
    BaseTable,
    BinaryOp,
    ColumnRef,
    Expr,
    FuncCall,
    RowConstructor,
    ScalarSubquery,
    SelectItem,
    SelectQuery,
    SetOp,
    Star,
    and_conjuncts,
    and_join,
    contains_aggregate,
    contains_subquery,
    set_op_chain,
    walk_expr,
)
from pgstudio.sqlast.normalize import normalize, normalize_expr
from pgstudio.sqlast.render import render_select
from pgstudio.sqlast.tokens import Token, TokenKind, tokenize


class Rule(str, Enum):
    A_STAR_EXPANSION = "A_STAR_EXPANSION"
    B_HAVING_TO_WHERE = "B_HAVING_TO_WHERE"
    C_REDUNDANT_DISTINCT = "C_REDUNDANT_DISTINCT"
    D_COUNT_STAR_ALTERNATIVE = "D_COUNT_STAR_ALTERNATIVE"
    E_SUBQUERY_FUSION = "E_SUBQUERY_FUSION"
    F_UNION_TO_UNION_ALL = "F_UNION_TO_UNION_ALL"


class Equivalence(str, Enum):
    PRESERVING = "preserving"
    ALTERING_NEEDS_CONFIRMATION = "altering_needs_confirmation"
    APPROXIMATE = "approximate"


@dataclass(frozen=True)
class Diagnostic:
    """One tip: a span into the canonical SQL, the advice, and an optional rewrite."""

    rule: Rule
    span: tuple[int, int]
    message: str
    rewrite: SelectQuery | None
    equivalence: Equivalence
    fingerprint: str


def query_fingerprint(query: SelectQuery) -> str:
    """Stable identity of a query's meaning, used to detect stale diagnostics."""
    canonical = render_select(normalize(query)).text
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:24]


def analyze(query: SelectQuery, catalog: SchemaCatalog | None = None) -> list[Diagnostic]:
    """Run all six detectors and return diagnostics ordered by span start."""
    canonical = render_select(query)
    tokens = tokenize(canonical.text)
    fingerprint = query_fingerprint(query)
    context = _Context(query, catalog, canonical.text, canonical.clause_spans, tokens, fingerprint)

    diagnostics: list[Diagnostic] = []
    diagnostics.extend(_detect_star_expansion(context))
    diagnostics.extend(_detect_having_to_where(context))
    diagnostics.extend(_detect_redundant_distinct(context))
    diagnostics.extend(_detect_count_star(context))
    diagnostics.extend(_detect_subquery_fusion(context))
    diagnostics.extend(_detect_union_all(context))
    diagnostics.sort(key=lambda d: (d.span[0], d.rule.value))
    return diagnostics


def apply_rewrite(query: SelectQuery, diagnostic: Diagnostic) -> SelectQuery:
    """Return the diagnostic's rewrite, refusing tips made for another query."""
    if diagnostic.fingerprint != query_fingerprint(query):
        raise StaleDiagnostic()
    if diagnostic.rewrite is None:
        raise NoRewriteAvailable()
    return diagnostic.rewrite


@dataclass(frozen=True)
class _Context:
    query: SelectQuery
    catalog: SchemaCatalog | None
    text: str
    clause_spans: dict[str, tuple[int, int]]
    tokens: list[Token]
    fingerprint: str

    def single_branch(self) -> bool:
        return self.query.set_op is None


# -- rule A: name the columns instead of * ----------------------------------------


def _select_list_start_token(tokens: list[Token]) -> int:
    """Index of the first token after SELECT [DISTINCT]."""
    index = 1
    if index < len(tokens) and tokens[index].text.upper() == "DISTINCT":
        index += 1
    return index


def _detect_star_expansion(context: _Context) -> list[Diagnostic]:
    query = context.query
    if not isinstance(query.select, Star) or not context.single_branch():
        return []
    star_token = context.tokens[_select_list_start_token(context.tokens)]
    span = star_token.span

    expansion = _expand_star(query, context.catalog)
    if expansion is None:
        return [
            Diagnostic(
                rule=Rule.A_STAR_EXPANSION,
                span=span,
                message=(
                    "* asks for every column of every table, so the database reads "
                    "and sends data the query may never use. List just the columns "
                    "you need."
                ),
                rewrite=None,
                equivalence=Equivalence.PRESERVING,
                fingerprint=context.fingerprint,
            )
        ]
    rewrite, labels = expansion
    return [
        Diagnostic(
            rule=Rule.A_STAR_EXPANSION,
            span=span,
            message=(
                "* asks for every column, which makes the database fetch data the "
                f"query may never use. Here * means: {', '.join(labels)}. Keep only "
                "the columns you actually need."
            ),
            rewrite=rewrite,
            equivalence=Equivalence.PRESERVING,
            fingerprint=context.fingerprint,
        )
    ]


def _expand_star(
    query: SelectQuery, catalog: SchemaCatalog | None
) -> tuple[SelectQuery, list[str]] | None:
    """Expand * into the declared columns, or None if any table is unknown."""
    if catalog is None or query.from_table is None:
        return None
    sources: list[tuple[str, TableDef]] = []
    for ref in [query.from_table] + [join.table for join in query.joins]:
        if not isinstance(ref, BaseTable):
            return None
        lookup = f"{ref.schema}.{ref.name}" if ref.schema else ref.name
        table = catalog.resolve_table(lookup)
        if table is None:
            return None
        sources.append((ref.alias or ref.name, table))

    qualify = len(sources) > 1
    items: list[SelectItem] = []
    labels: list[str] = []
    for effective_name, table in sources:
        for column in table.columns:
            if qualify:
                items.append(SelectItem(ColumnRef(column.name, table=effective_name)))
                labels.append(f"{effective_name}.{column.name}")
            else:
                items.append(SelectItem(ColumnRef(column.name)))
                labels.append(column.name)
    return replace(query, select=tuple(items)), labels


# -- rule B: filter plain columns in WHERE, not HAVING -----------------------------


def _detect_having_to_where(context: _Context) -> list[Diagnostic]:
    query = context.query
    if not context.single_branch() or query.having is None or not query.group_by:
        return []

    grouped = {normalize_expr(item) for item in query.group_by if isinstance(item, ColumnRef)}
    movable: list[Expr] = []
    remaining: list[Expr] = []
    for conjunct in and_conjuncts(query.having):
        if _movable_to_where(conjunct, grouped):
            movable.append(conjunct)
        else:
            remaining.append(conjunct)
    if not movable:
        return []

    new_where = and_join(and_conjuncts(query.where) + movable)
    rewrite = replace(query, where=new_where, having=and_join(remaining))
    count = "This HAVING condition" if len(movable) == 1 else "Part of this HAVING clause"
    return [
        Diagnostic(
            rule=Rule.B_HAVING_TO_WHERE,
            span=context.clause_spans["HAVING"],
            message=(
                f"{count} does not use an aggregate like COUNT or SUM, so it can "
                "run earlier as a WHERE filter. Filtering rows before they are "
                "grouped means less work for the grouping step."
            ),
            rewrite=rewrite,
            equivalence=Equivalence.PRESERVING,
            fingerprint=context.fingerprint,
        )
    ]


def _movable_to_where(conjunct: Expr, grouped: set[Expr]) -> bool:
    """A HAVING conjunct may move to WHERE when it only looks at grouped columns."""
    if contains_aggregate(conjunct) or contains_subquery(conjunct):
        return False
    refs = [node for node in walk_expr(conjunct) if isinstance(node, ColumnRef)]
    return all(normalize_expr(ref) in grouped for ref in refs)


# -- rule C: DISTINCT that cannot change the result --------------------------------


def _detect_redundant_distinct(context: _Context) -> list[Diagnostic]:
    query = context.query
    if not query.distinct or not context.single_branch():
        return []
    span = context.tokens[1].span  # DISTINCT always follows SELECT

    proof_column = _distinct_proof_column(query, context.catalog)
    if proof_column is None:
        return [
            Diagnostic(
                rule=Rule.C_REDUNDANT_DISTINCT,
                span=span,
                message=(
                    "DISTINCT makes the database compare every result row against "
                    "the others to drop duplicates, which is expensive on large "
                    "results. Keep it only when duplicate rows are actually "
                    "possible; removing it changes the result otherwise."
                ),
                rewrite=None,
                equivalence=Equivalence.ALTERING_NEEDS_CONFIRMATION,
                fingerprint=context.fingerprint,
            )
        ]
    return [
        Diagnostic(
            rule=Rule.C_REDUNDANT_DISTINCT,
            span=span,
            message=(
                f'Every value of "{proof_column}" is unique and never missing, so '
                "the result cannot contain duplicate rows. DISTINCT only adds "
                "comparison work here and can be dropped safely."
            ),
            rewrite=replace(query, distinct=False),
            equivalence=Equivalence.PRESERVING,
            fingerprint=context.fingerprint,
        )
    ]


def _distinct_proof_column(query: SelectQuery, catalog: SchemaCatalog | None) -> str | None:
    """Name of a selected column that makes DISTINCT provably redundant."""
    if (
        catalog is None
        or query.joins
        or query.group_by
        or query.having is not None
        or isinstance(query.select, Star)
        or not isinstance(query.from_table, BaseTable)
    ):
        return None
    table_ref = query.from_table
    lookup = f"{table_ref.schema}.{table_ref.name}" if table_ref.schema else table_ref.name
    if catalog.resolve_table(lookup) is None:
        return None
    unique_columns = catalog.unique_not_null_columns(lookup)
    allowed_qualifiers = {None, (table_ref.alias or table_ref.name).lower()}
    for item in query.select:
        expr = item.expr
        if not isinstance(expr, ColumnRef):
            continue
        qualifier = expr.table.lower() if expr.table else None
        if qualifier in allowed_qualifiers and expr.name.lower() in unique_columns:
            return expr.name
    return None


# -- rule D: COUNT(*) over a whole table -------------------------------------------


def _detect_count_star(context: _Context) -> list[Diagnostic]:
    query = context.query
    if (
        not context.single_branch()
        or query.from_table is None
        or query.joins
        or query.where is not None
        or query.group_by
        or query.having is not None
        or query.distinct
        or isinstance(query.select, Star)
        or len(query.select) != 1
    ):
        return []
    expr = query.select[0].expr
    if not (isinstance(expr, FuncCall) and expr.name == "count" and expr.star):
        return []

    span = _count_star_span(context.tokens)
    if span is None:
        return []
    return [
        Diagnostic(
            rule=Rule.D_COUNT_STAR_ALTERNATIVE,
            span=span,
            message=(
                "COUNT(*) walks the entire table to produce an exact number, which "
                "can take a long time on large tables. When a close estimate is "
                "enough, the row statistics the database already keeps about each "
                "table answer instantly. Use the exact count only when it has to "
                "be exact."
            ),
            rewrite=None,
            equivalence=Equivalence.APPROXIMATE,
            fingerprint=context.fingerprint,
        )
    ]


def _count_star_span(tokens: list[Token]) -> tuple[int, int] | None:
    for index in range(len(tokens) - 3):
        name, open_paren, star, close_paren = tokens[index : index + 4]
        if (
            name.text.upper() == "COUNT"
            and open_paren.text == "("
            and star.text == "*"
            and close_paren.text == ")"
        ):
            return (name.span[0], close_paren.span[1])
    return None


# -- rule E: several subqueries over the same rows ---------------------------------


def _detect_subquery_fusion(context: _Context) -> list[Diagnostic]:
    query = context.query
    if not context.single_branch() or query.where is None:
        return []
    conjuncts = and_conjuncts(query.where)

    # group fusable conjuncts by the rows their subqueries read
    groups: dict[object, list[int]] = {}
    order: list[object] = []
    for index, conjunct in enumerate(conjuncts):
        signature = _fusable_signature(conjunct)
        if signature is None:
            continue
        if signature not in groups:
            groups[signature] = []
            order.append(signature)
        groups[signature].append(index)

    fused_indexes: list[int] | None = None
    for signature in order:
        if len(groups[signature]) >= 2:
            fused_indexes = groups[signature]
            break
    if fused_indexes is None:
        return []

    members = [conjuncts[i] for i in fused_indexes]
    left = RowConstructor(tuple(c.lhs for c in members))
    inner_queries = [c.rhs.query for c in members]
    fused_select = tuple(item for inner in inner_queries for item in inner.select)
    fused_subquery = replace(inner_queries[0], select=fused_select)
    fused = BinaryOp("=", left, ScalarSubquery(fused_subquery))

    rebuilt: list[Expr] = []
    for index, conjunct in enumerate(conjuncts):
        if index == fused_indexes[0]:
            rebuilt.append(fused)
        elif index not in fused_indexes:
            rebuilt.append(conjunct)
    rewrite = replace(query, where=and_join(rebuilt))

    return [
        Diagnostic(
            rule=Rule.E_SUBQUERY_FUSION,
            span=context.clause_spans["WHERE"],
            message=(
                f"{len(members)} of these conditions each run their own subquery "
                "over the same rows. Comparing against one combined subquery reads "
                "those rows once instead of repeating the scan per condition."
            ),
            rewrite=rewrite,
            equivalence=Equivalence.PRESERVING,
            fingerprint=context.fingerprint,
        )
    ]


def _fusable_signature(conjunct: Expr) -> object | None:
    """Identity of the rows a fusable `expr = (SELECT agg ...)` conjunct reads."""
    if not (isinstance(conjunct, BinaryOp) and conjunct.op == "="):
        return None
    if not isinstance(conjunct.rhs, ScalarSubquery):
        return None
    if contains_subquery(conjunct.lhs) or contains_aggregate(conjunct.lhs):
        return None
    inner = conjunct.rhs.query
    if (
        inner.set_op is not None
        or inner.joins
        or inner.group_by
        or inner.having is not None
        or inner.order_by
        or inner.distinct
        or not isinstance(inner.from_table, BaseTable)
        or isinstance(inner.select, Star)
        or len(inner.select) != 1
    ):
        return None
    item = inner.select[0]
    if not (
        isinstance(item.expr, FuncCall)
        and item.expr.name in AGGREGATE_FUNCTIONS
        and not contains_subquery(item.expr)
    ):
        return None
    where_key = normalize_expr(inner.where) if inner.where is not None else None
    return (inner.from_table, where_key)


# -- rule F: UNION pays for duplicate elimination ----------------------------------


def _detect_union_all(context: _Context) -> list[Diagnostic]:
    chain = set_op_chain(context.query)
    plain_positions = [i for i, (op, _) in enumerate(chain) if op == "UNION"]
    if not plain_positions:
        return []

    spans = _plain_union_spans(context.tokens)
    diagnostics = []
    for occurrence, position in enumerate(plain_positions):
        rewritten_chain = list(chain)
        op, branch = rewritten_chain[position]
        rewritten_chain[position] = ("UNION ALL", branch)
        diagnostics.append(
            Diagnostic(
                rule=Rule.F_UNION_TO_UNION_ALL,
                span=spans[occurrence],
                message=(
                    "UNION compares every row across both results to remove "
                    "duplicates before returning anything. If the two results "
                    "cannot overlap, or duplicates are acceptable, UNION ALL "
                    "skips that work. Careful: UNION ALL keeps duplicate rows, "
                    "so the result can change."
                ),
                rewrite=_rebuild_chain(rewritten_chain),
                equivalence=Equivalence.ALTERING_NEEDS_CONFIRMATION,
                fingerprint=context.fingerprint,
            )
        )
    return diagnostics


def _plain_union_spans(tokens: list[Token]) -> list[tuple[int, int]]:
    """Spans of UNION keywords not followed by ALL, in text order."""
    spans = []
    for index, token in enumerate(tokens):
        if token.kind is TokenKind.KEYWORD and token.text.upper() == "UNION":
            following = tokens[index + 1] if index + 1 < len(tokens) else None
            if following is None or following.text.upper() != "ALL":
                spans.append(token.span)
    return spans


def _rebuild_chain(chain: list[tuple[str | None, SelectQuery]]) -> SelectQuery:
    """Thread a flattened set-operation chain back into a linked query."""
    tail: SetOp | None = None
    for op, branch in reversed(chain):
        linked = replace(branch, set_op=tail)
        if op is None:
            return linked
        tail = SetOp(op, linked)
    raise AssertionError("chain must start with the head branch")
