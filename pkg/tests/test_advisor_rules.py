"""Detector and rewrite behavior for the six query tips."""

import pytest

from pgstudio.advisor import (
    Diagnostic,
    Equivalence,
    NoRewriteAvailable,
    Rule,
    StaleDiagnostic,
    analyze,
    apply_rewrite,
    query_fingerprint,
)
from pgstudio.catalog import ColumnDef, ConstraintDef, ConstraintKind, SchemaCatalog, TableDef
from pgstudio.minidb import assert_equivalent, bags_equal, eval_select, profiles_from_catalog
from pgstudio.sqlast import parse_select, render_select

NOT_NULL = ConstraintDef(kind=ConstraintKind.NOT_NULL)
UNIQUE = ConstraintDef(kind=ConstraintKind.UNIQUE)


@pytest.fixture()
def catalog():
    cat = SchemaCatalog()
    cat.add_table(TableDef(name="table_name", columns=(
        ColumnDef("col_1", "integer"), ColumnDef("col_2", "integer"),
        ColumnDef("col_3", "integer"), ColumnDef("col_4", "integer"),
    )))
    cat.add_table(TableDef(name="emp", columns=(
        ColumnDef("id", "integer", constraints=(NOT_NULL, UNIQUE)),
        ColumnDef("name", "text"),
        ColumnDef("dept", "text"),
        ColumnDef("badge", "integer", constraints=(UNIQUE,)),  # nullable unique
    )))
    cat.add_table(TableDef(name="dept", columns=(
        ColumnDef("code", "text", constraints=(NOT_NULL, UNIQUE)),
        ColumnDef("city", "text"),
    )))
    cat.add_table(TableDef(name="tablename1", columns=(
        ColumnDef("col1", "integer"), ColumnDef("col2", "integer"),
        ColumnDef("col3", "integer"), ColumnDef("col4", "text"),
    )))
    cat.add_table(TableDef(name="tablename2", columns=(
        ColumnDef("col2", "integer"), ColumnDef("col3", "integer"),
    )))
    return cat


def only(diagnostics: list[Diagnostic], rule: Rule) -> Diagnostic:
    matches = [d for d in diagnostics if d.rule is rule]
    assert len(matches) == 1, f"expected exactly one {rule.value}, got {diagnostics}"
    return matches[0]


def rewrite_text(query, diagnostic) -> str:
    return render_select(apply_rewrite(query, diagnostic)).text


# --- rule A: star expansion --------------------------------------------------------

def test_star_expands_to_declared_column_order(catalog):
    query = parse_select("SELECT * FROM table_name;")
    diagnostic = only(analyze(query, catalog), Rule.A_STAR_EXPANSION)
    assert diagnostic.equivalence is Equivalence.PRESERVING
    assert rewrite_text(query, diagnostic) == (
        "SELECT col_1, col_2, col_3, col_4 FROM table_name;"
    )


def test_star_span_covers_the_star(catalog):
    query = parse_select("SELECT * FROM table_name;")
    diagnostic = only(analyze(query, catalog), Rule.A_STAR_EXPANSION)
    start, end = diagnostic.span
    assert render_select(query).text[start:end] == "*"


def test_star_over_join_qualifies_every_column(catalog):
    query = parse_select("SELECT * FROM emp JOIN dept ON dept = code;")
    diagnostic = only(analyze(query, catalog), Rule.A_STAR_EXPANSION)
    assert rewrite_text(query, diagnostic) == (
        "SELECT emp.id, emp.name, emp.dept, emp.badge, dept.code, dept.city "
        "FROM emp INNER JOIN dept ON dept = code;"
    )


def test_star_with_alias_uses_the_alias(catalog):
    query = parse_select("SELECT * FROM emp e JOIN dept d ON e.dept = d.code;")
    diagnostic = only(analyze(query, catalog), Rule.A_STAR_EXPANSION)
    assert "e.id" in rewrite_text(query, diagnostic)


def test_star_over_unknown_table_is_a_tip_without_rewrite(catalog):
    query = parse_select("SELECT * FROM mystery;")
    diagnostic = only(analyze(query, catalog), Rule.A_STAR_EXPANSION)
    assert diagnostic.rewrite is None
    with pytest.raises(NoRewriteAvailable):
        apply_rewrite(query, diagnostic)


def test_star_rewrite_message_previews_the_columns(catalog):
    query = parse_select("SELECT * FROM table_name;")
    diagnostic = only(analyze(query, catalog), Rule.A_STAR_EXPANSION)
    assert "col_1, col_2, col_3, col_4" in diagnostic.message


def test_star_rule_reaches_a_fixpoint(catalog):
    query = parse_select("SELECT * FROM table_name;")
    diagnostic = only(analyze(query, catalog), Rule.A_STAR_EXPANSION)
    rewritten = apply_rewrite(query, diagnostic)
    rules_after = [d.rule for d in analyze(rewritten, catalog)]
    assert Rule.A_STAR_EXPANSION not in rules_after


# --- rule B: HAVING to WHERE -------------------------------------------------------

def test_aggregate_free_having_conjunct_moves_to_where(catalog):
    query = parse_select(
        "SELECT dept, COUNT(*) FROM emp GROUP BY dept HAVING dept <> 'x' AND COUNT(*) > 1;"
    )
    diagnostic = only(analyze(query, catalog), Rule.B_HAVING_TO_WHERE)
    assert diagnostic.equivalence is Equivalence.PRESERVING
    assert rewrite_text(query, diagnostic) == (
        "SELECT dept, COUNT(*) FROM emp WHERE dept <> 'x' "
        "GROUP BY dept HAVING COUNT(*) > 1;"
    )


def test_having_fully_moved_disappears(catalog):
    query = parse_select("SELECT dept FROM emp GROUP BY dept HAVING dept = 'sales';")
    diagnostic = only(analyze(query, catalog), Rule.B_HAVING_TO_WHERE)
    assert rewrite_text(query, diagnostic) == (
        "SELECT dept FROM emp WHERE dept = 'sales' GROUP BY dept;"
    )


def test_having_extends_an_existing_where(catalog):
    query = parse_select(
        "SELECT dept FROM emp WHERE name <> 'ann' GROUP BY dept HAVING dept = 'sales';"
    )
    diagnostic = only(analyze(query, catalog), Rule.B_HAVING_TO_WHERE)
    assert rewrite_text(query, diagnostic) == (
        "SELECT dept FROM emp WHERE name <> 'ann' AND dept = 'sales' GROUP BY dept;"
    )


def test_having_span_covers_the_having_clause(catalog):
    query = parse_select("SELECT dept FROM emp GROUP BY dept HAVING dept = 'x';")
    diagnostic = only(analyze(query, catalog), Rule.B_HAVING_TO_WHERE)
    start, end = diagnostic.span
    assert render_select(query).text[start:end] == "HAVING dept = 'x'"


def test_aggregate_only_having_is_left_alone(catalog):
    query = parse_select("SELECT dept FROM emp GROUP BY dept HAVING COUNT(*) > 1;")
    assert [d.rule for d in analyze(query, catalog)] == []


def test_having_without_group_by_is_left_alone(catalog):
    # over an empty table, WHERE and HAVING answers differ when there is no
    # GROUP BY: the aggregate query still returns its single row
    query = parse_select("SELECT COUNT(*) FROM emp HAVING COUNT(*) > 0;")
    assert [d.rule for d in analyze(query, catalog)] == []


def test_having_on_ungrouped_column_is_not_moved(catalog):
    query = parse_select("SELECT dept FROM emp GROUP BY dept HAVING name = 'x';")
    assert [d.rule for d in analyze(query, catalog)] == []


# --- rule C: redundant DISTINCT ----------------------------------------------------

def test_distinct_dropped_when_a_unique_not_null_column_is_selected(catalog):
    query = parse_select("SELECT DISTINCT id, name FROM emp;")
    diagnostic = only(analyze(query, catalog), Rule.C_REDUNDANT_DISTINCT)
    assert diagnostic.equivalence is Equivalence.PRESERVING
    assert rewrite_text(query, diagnostic) == "SELECT id, name FROM emp;"


def test_distinct_span_covers_the_keyword(catalog):
    query = parse_select("SELECT DISTINCT id FROM emp;")
    diagnostic = only(analyze(query, catalog), Rule.C_REDUNDANT_DISTINCT)
    start, end = diagnostic.span
    assert render_select(query).text[start:end] == "DISTINCT"


def test_distinct_on_non_unique_columns_is_a_tip_only(catalog):
    query = parse_select("SELECT DISTINCT name FROM emp;")
    diagnostic = only(analyze(query, catalog), Rule.C_REDUNDANT_DISTINCT)
    assert diagnostic.rewrite is None
    assert diagnostic.equivalence is Equivalence.ALTERING_NEEDS_CONFIRMATION


def test_distinct_on_nullable_unique_column_keeps_the_tip_only(catalog):
    # two NULL badges collapse under DISTINCT, so removal is not safe
    query = parse_select("SELECT DISTINCT badge FROM emp;")
    diagnostic = only(analyze(query, catalog), Rule.C_REDUNDANT_DISTINCT)
    assert diagnostic.rewrite is None


def test_distinct_over_join_is_a_tip_only(catalog):
    query = parse_select("SELECT DISTINCT id FROM emp JOIN dept ON dept = code;")
    diagnostic = only(analyze(query, catalog), Rule.C_REDUNDANT_DISTINCT)
    assert diagnostic.rewrite is None


# --- rule D: COUNT(*) alternative --------------------------------------------------

def test_count_star_over_whole_table_gets_an_estimate_tip(catalog):
    query = parse_select("SELECT COUNT(*) FROM emp;")
    diagnostic = only(analyze(query, catalog), Rule.D_COUNT_STAR_ALTERNATIVE)
    assert diagnostic.rewrite is None
    assert diagnostic.equivalence is Equivalence.APPROXIMATE
    start, end = diagnostic.span
    assert render_select(query).text[start:end] == "COUNT(*)"


def test_count_star_with_where_is_not_flagged(catalog):
    query = parse_select("SELECT COUNT(*) FROM emp WHERE dept = 'x';")
    assert [d.rule for d in analyze(query, catalog)] == []


def test_count_column_is_not_flagged(catalog):
    query = parse_select("SELECT COUNT(name) FROM emp;")
    assert [d.rule for d in analyze(query, catalog)] == []


# --- rule E: subquery fusion -------------------------------------------------------

PAPER_STYLE_QUERY = (
    "SELECT col1 FROM tablename1 "
    "WHERE col2 = (SELECT MAX(col2) FROM tablename2) "
    "AND col3 = (SELECT MAX(col3) FROM tablename2) "
    "AND col4 = 'testvalue1';"
)


def test_twin_subqueries_fuse_into_a_row_comparison(catalog):
    query = parse_select(PAPER_STYLE_QUERY)
    diagnostic = only(analyze(query, catalog), Rule.E_SUBQUERY_FUSION)
    assert diagnostic.equivalence is Equivalence.PRESERVING
    assert rewrite_text(query, diagnostic) == (
        "SELECT col1 FROM tablename1 "
        "WHERE (col2, col3) = (SELECT MAX(col2), MAX(col3) FROM tablename2) "
        "AND col4 = 'testvalue1';"
    )


def test_fusion_span_covers_the_where_clause(catalog):
    query = parse_select(PAPER_STYLE_QUERY)
    diagnostic = only(analyze(query, catalog), Rule.E_SUBQUERY_FUSION)
    start, end = diagnostic.span
    assert render_select(query).text[start:end].startswith("WHERE ")


def test_fusion_requires_identical_subquery_rows(catalog):
    query = parse_select(
        "SELECT col1 FROM tablename1 "
        "WHERE col2 = (SELECT MAX(col2) FROM tablename2) "
        "AND col3 = (SELECT MAX(col3) FROM tablename2 WHERE col2 > 0);"
    )
    assert [d.rule for d in analyze(query, catalog)] == []


def test_fusion_keeps_matching_inner_filters(catalog):
    query = parse_select(
        "SELECT col1 FROM tablename1 "
        "WHERE col2 = (SELECT MAX(col2) FROM tablename2 WHERE col2 > 0) "
        "AND col3 = (SELECT MIN(col3) FROM tablename2 WHERE col2 > 0);"
    )
    diagnostic = only(analyze(query, catalog), Rule.E_SUBQUERY_FUSION)
    assert rewrite_text(query, diagnostic) == (
        "SELECT col1 FROM tablename1 "
        "WHERE (col2, col3) = (SELECT MAX(col2), MIN(col3) FROM tablename2 WHERE col2 > 0);"
    )


def test_single_subquery_is_not_fused(catalog):
    query = parse_select(
        "SELECT col1 FROM tablename1 WHERE col2 = (SELECT MAX(col2) FROM tablename2);"
    )
    assert [d.rule for d in analyze(query, catalog)] == []


def test_fusion_reaches_a_fixpoint(catalog):
    query = parse_select(PAPER_STYLE_QUERY)
    diagnostic = only(analyze(query, catalog), Rule.E_SUBQUERY_FUSION)
    rewritten = apply_rewrite(query, diagnostic)
    assert Rule.E_SUBQUERY_FUSION not in [d.rule for d in analyze(rewritten, catalog)]


# --- rule F: UNION to UNION ALL ----------------------------------------------------

def test_union_suggests_union_all_with_confirmation(catalog):
    query = parse_select("SELECT name FROM emp UNION SELECT city FROM dept;")
    diagnostic = only(analyze(query, catalog), Rule.F_UNION_TO_UNION_ALL)
    assert diagnostic.equivalence is Equivalence.ALTERING_NEEDS_CONFIRMATION
    assert rewrite_text(query, diagnostic) == (
        "SELECT name FROM emp UNION ALL SELECT city FROM dept;"
    )
    start, end = diagnostic.span
    assert render_select(query).text[start:end] == "UNION"


def test_union_all_is_not_flagged(catalog):
    query = parse_select("SELECT name FROM emp UNION ALL SELECT city FROM dept;")
    assert [d.rule for d in analyze(query, catalog)] == []


def test_each_plain_union_in_a_chain_gets_its_own_tip(catalog):
    query = parse_select(
        "SELECT name FROM emp UNION ALL SELECT city FROM dept UNION SELECT name FROM emp;"
    )
    diagnostics = [d for d in analyze(query, catalog) if d.rule is Rule.F_UNION_TO_UNION_ALL]
    assert len(diagnostics) == 1
    text = render_select(query).text
    start, end = diagnostics[0].span
    assert text[start:end] == "UNION"
    assert text[end:end + 4] == " SEL"  # the plain one, not the UNION ALL
    assert rewrite_text(query, diagnostics[0]).count("UNION ALL") == 2


def test_message_mentions_the_duplicates_caveat(catalog):
    query = parse_select("SELECT name FROM emp UNION SELECT city FROM dept;")
    diagnostic = only(analyze(query, catalog), Rule.F_UNION_TO_UNION_ALL)
    assert "duplicate" in diagnostic.message.lower()


# --- cross-cutting behavior --------------------------------------------------------

def test_diagnostics_are_ordered_by_span(catalog):
    query = parse_select(
        "SELECT DISTINCT dept FROM emp GROUP BY dept HAVING dept <> 'x';"
    )
    diagnostics = analyze(query, catalog)
    assert [d.rule for d in diagnostics] == [
        Rule.C_REDUNDANT_DISTINCT,
        Rule.B_HAVING_TO_WHERE,
    ]
    starts = [d.span[0] for d in diagnostics]
    assert starts == sorted(starts)


def test_stale_diagnostic_is_refused(catalog):
    query = parse_select("SELECT * FROM table_name;")
    diagnostic = only(analyze(query, catalog), Rule.A_STAR_EXPANSION)
    changed = parse_select("SELECT * FROM table_name WHERE col_1 = 1;")
    with pytest.raises(StaleDiagnostic):
        apply_rewrite(changed, diagnostic)


def test_fingerprint_ignores_case_and_spacing(catalog):
    a = parse_select("select col_1 from table_name;")
    b = parse_select("SELECT   col_1   FROM table_name;")
    assert query_fingerprint(a) == query_fingerprint(b)


def test_clean_query_has_no_diagnostics(catalog):
    query = parse_select("SELECT name FROM emp WHERE dept = 'sales';")
    assert analyze(query, catalog) == []


# --- rewrite soundness against the evaluator ---------------------------------------

def soundness_trials(query_text: str, rule: Rule, catalog, trials: int = 40) -> None:
    query = parse_select(query_text)
    diagnostic = only(analyze(query, catalog), rule)
    assert diagnostic.rewrite is not None
    profiles = profiles_from_catalog(catalog)
    verdict = assert_equivalent(query, diagnostic.rewrite, profiles, seed=11, trials=trials)
    assert verdict.equivalent, verdict.detail


def test_star_expansion_rewrite_is_sound(catalog):
    soundness_trials("SELECT * FROM emp;", Rule.A_STAR_EXPANSION, catalog)


def test_having_rewrite_is_sound(catalog):
    soundness_trials(
        "SELECT dept, COUNT(*) FROM emp GROUP BY dept HAVING dept <> 'x' AND COUNT(*) > 1;",
        Rule.B_HAVING_TO_WHERE,
        catalog,
    )


def test_distinct_rewrite_is_sound(catalog):
    soundness_trials("SELECT DISTINCT id, name FROM emp;", Rule.C_REDUNDANT_DISTINCT, catalog)


def test_fusion_rewrite_is_sound(catalog):
    soundness_trials(
        "SELECT col1 FROM tablename1 "
        "WHERE col2 = (SELECT MAX(col2) FROM tablename2) "
        "AND col3 = (SELECT MAX(col3) FROM tablename2) "
        "AND col4 = 'testvalue1';",
        Rule.E_SUBQUERY_FUSION,
        catalog,
    )


def test_union_rewrite_really_can_change_results(catalog):
    query = parse_select("SELECT name FROM emp UNION SELECT name FROM emp;")
    diagnostic = only(analyze(query, catalog), Rule.F_UNION_TO_UNION_ALL)
    rewritten = apply_rewrite(query, diagnostic)
    profiles = profiles_from_catalog(catalog, ["emp"])
    verdict = assert_equivalent(query, rewritten, profiles, seed=11, trials=50)
    assert not verdict.equivalent
    assert verdict.counterexample is not None
    left = eval_select(query, verdict.counterexample)
    right = eval_select(rewritten, verdict.counterexample)
    assert not bags_equal(left, right)
