"""Cost model behavior: enumeration, pricing, and the comparison report."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgstudio.advisor import (
    DEFAULT_COST_MODEL,
    TableStats,
    UnsupportedShape,
    compare_plans,
    plan,
    predicate_selectivity,
    predicate_weight,
)
from pgstudio.catalog import ColumnDef, SchemaCatalog, TableDef, UnknownTable
from pgstudio.sqlast import parse_select, render_expr
from pgstudio.sqlast.nodes import and_conjuncts


@pytest.fixture()
def catalog():
    cat = SchemaCatalog()
    cat.add_table(TableDef(name="customers", columns=(
        ColumnDef("ssn", "text"), ColumnDef("address", "text"),
        ColumnDef("education", "text"),
    )))
    return cat


CUSTOMERS_QUERY = (
    "SELECT ssn, address FROM customers "
    "WHERE credit_score(ssn) > 600 AND education = 'College';"
)


def filters_bottom_up(node):
    """Filter details in the order they are applied, scan first."""
    order = []
    while node.children:
        if node.operator == "Filter":
            order.append(node.detail)
        node = node.children[0]
    return list(reversed(order))


def test_two_conjuncts_give_exactly_two_plans(catalog):
    report = plan(parse_select(CUSTOMERS_QUERY), catalog, {"customers": TableStats("customers", 10000)})
    assert report.plan_count == 2
    assert len(report.alternatives) == 1


def test_cheap_plan_filters_on_equality_first(catalog):
    report = plan(parse_select(CUSTOMERS_QUERY), catalog, [TableStats("customers", 10000)])
    assert report.estimated_cost == pytest.approx(30000.0)
    applied = filters_bottom_up(report.plan)
    assert "education" in applied[0]
    assert "credit_score" in applied[1]


def test_expensive_ordering_costs_and_ratio(catalog):
    report = plan(parse_select(CUSTOMERS_QUERY), catalog, [TableStats("customers", 10000)])
    _, alternative_cost = report.alternatives[0]
    assert alternative_cost == pytest.approx(113300.0)
    assert alternative_cost / report.estimated_cost == pytest.approx(3.7766, rel=1e-3)
    assert alternative_cost > report.estimated_cost


def test_report_times_are_linear_scalings(catalog):
    report = plan(parse_select(CUSTOMERS_QUERY), catalog, [TableStats("customers", 10000)])
    assert report.estimated_planning_time_ms == pytest.approx(0.02)
    assert report.estimated_execution_time_ms == pytest.approx(30.0)


def test_no_where_gives_a_single_plan(catalog):
    report = plan(parse_select("SELECT ssn FROM customers;"), catalog)
    assert report.plan_count == 1
    assert report.alternatives == ()
    assert report.estimated_planning_time_ms == pytest.approx(0.01)
    # scan of the default row count plus a free projection
    assert report.estimated_cost == pytest.approx(DEFAULT_COST_MODEL.default_row_count)


def test_three_conjuncts_enumerate_six_orderings(catalog):
    report = plan(
        parse_select(
            "SELECT ssn FROM customers "
            "WHERE ssn = 'x' AND education = 'College' AND address <> 'unknown';"
        ),
        catalog,
    )
    assert report.plan_count == 6
    costs = [cost for _, cost in report.alternatives]
    assert costs == sorted(costs)
    assert all(report.estimated_cost <= cost for cost in costs)


def test_plan_trees_are_scan_rooted_chains(catalog):
    report = plan(parse_select(CUSTOMERS_QUERY), catalog, [TableStats("customers", 10000)])
    node = report.plan
    assert node.operator == "Project"
    while node.children:
        assert len(node.children) == 1
        node = node.children[0]
    assert node.operator == "SeqScan"
    assert node.detail == "customers"


def test_single_join_uses_a_nested_loop(catalog):
    catalog.add_table(TableDef(name="orders", columns=(ColumnDef("ssn", "text"),)))
    report = plan(
        parse_select("SELECT customers.ssn FROM customers JOIN orders ON customers.ssn = orders.ssn;"),
        catalog,
        [TableStats("customers", 100), TableStats("orders", 50)],
    )
    operators = set()

    def collect(node):
        operators.add(node.operator)
        for child in node.children:
            collect(child)

    collect(report.plan)
    assert "NestedLoopJoin" in operators
    # scans 100 + 50, join examines 100 x 50 pairs at weight 1
    assert report.estimated_cost == pytest.approx(100 + 50 + 5000)


def test_unsupported_shapes_name_the_construct(catalog):
    cases = [
        ("SELECT ssn FROM customers UNION SELECT ssn FROM customers;", "UNION"),
        ("SELECT n FROM (SELECT ssn AS n FROM customers) x;", "FROM"),
    ]
    for text, fragment in cases:
        with pytest.raises(UnsupportedShape) as caught:
            plan(parse_select(text), catalog)
        assert fragment.lower() in str(caught.value).lower()


def test_two_joins_are_unsupported(catalog):
    catalog.add_table(TableDef(name="a", columns=(ColumnDef("x", "integer"),)))
    catalog.add_table(TableDef(name="b", columns=(ColumnDef("x", "integer"),)))
    query = parse_select(
        "SELECT customers.ssn FROM customers "
        "JOIN a ON education = 'x' JOIN b ON address = 'y';"
    )
    with pytest.raises(UnsupportedShape) as caught:
        plan(query, catalog)
    assert "join" in str(caught.value).lower()


def test_unknown_table_is_reported_when_catalog_given(catalog):
    with pytest.raises(UnknownTable):
        plan(parse_select("SELECT x FROM ghost;"), catalog)


def test_negative_row_count_is_rejected():
    with pytest.raises(ValueError):
        TableStats("t", -1)


def test_predicate_weight_prices_functions_and_subqueries():
    heavy_call = and_conjuncts(parse_select("SELECT a FROM t WHERE f(a) > 1;").where)[0]
    heavy_sub = and_conjuncts(
        parse_select("SELECT a FROM t WHERE a = (SELECT MAX(a) FROM t);").where
    )[0]
    light = and_conjuncts(parse_select("SELECT a FROM t WHERE a > 1;").where)[0]
    assert predicate_weight(heavy_call) == 10.0
    assert predicate_weight(heavy_sub) == 10.0
    assert predicate_weight(light) == 1.0


def test_predicate_selectivity_by_operator():
    def predicate(text):
        return parse_select(f"SELECT a FROM t WHERE {text};").where

    assert predicate_selectivity(predicate("a = 1")) == 0.1
    assert predicate_selectivity(predicate("a > 1")) == 0.33
    assert predicate_selectivity(predicate("a <> 1")) == 0.33
    assert predicate_selectivity(predicate("NOT a = 1")) == 0.5


# --- the comparison report ---------------------------------------------------------

def test_comparison_report_shows_both_plans_and_the_ratio(catalog):
    text = compare_plans(
        parse_select(CUSTOMERS_QUERY), catalog, [TableStats("customers", 10000)]
    )
    assert "Compared 2 possible plans." in text
    assert "estimated cost 30000.00" in text
    assert "estimated cost 113300.00" in text
    assert "3.78x the chosen plan" in text
    assert "Seq Scan on customers" in text
    assert "estimates" in text


def test_comparison_report_without_alternatives(catalog):
    text = compare_plans(parse_select("SELECT ssn FROM customers;"), catalog)
    assert "No alternative orderings" in text


# --- cost model properties ---------------------------------------------------------

PREDICATE_POOL = [
    "ssn = 'a'",
    "education > 'b'",
    "credit_score(ssn) > 600",
    "helper(address) = 'c'",
    "address <> 'd'",
    "education = 'e'",
]


def build_query(conjuncts):
    return parse_select("SELECT ssn FROM customers WHERE " + " AND ".join(conjuncts) + ";")


def all_chain_costs(report):
    """Map each enumerated filter ordering (scan first) to its chain cost."""
    chains = {}
    for node, cost in [(report.plan, report.estimated_cost)] + list(report.alternatives):
        chains[tuple(filters_bottom_up(node))] = cost
    return chains


@settings(deadline=None)
@given(st.integers(1, 3), st.randoms(use_true_random=False))
def test_extending_any_ordering_never_lowers_its_cost(size, rng):
    # monotonicity holds ordering by ordering: the same filter chain with one
    # more condition appended costs at least as much. (The minimum over all
    # orderings can drop: a cheap selective filter added before an expensive
    # one reduces the rows the expensive filter sees.)
    chosen = rng.sample(PREDICATE_POOL, size + 1)
    added = parse_select(f"SELECT ssn FROM customers WHERE {chosen[-1]};").where
    smaller = all_chain_costs(plan(build_query(chosen[:size]), None, [TableStats("customers", 500)]))
    larger = all_chain_costs(plan(build_query(chosen), None, [TableStats("customers", 500)]))
    added_detail = render_expr(added)
    for ordering, cost in smaller.items():
        extended = ordering + (added_detail,)
        assert extended in larger
        assert larger[extended] >= cost


@given(st.integers(2, 4), st.randoms(use_true_random=False))
def test_cheapest_ordering_matches_the_rank_rule(size, rng):
    # classic result: sorting by (selectivity - 1) / weight is optimal for
    # filter chains, so the enumerated minimum must equal the ranked chain
    chosen = rng.sample(PREDICATE_POOL, size)
    query = build_query(chosen)
    conjuncts = and_conjuncts(query.where)
    rows = 500.0

    def chain_cost(order):
        n = rows
        total = rows  # the scan itself
        for predicate in order:
            total += n * predicate_weight(predicate)
            n *= predicate_selectivity(predicate)
        return total

    ranked = sorted(
        conjuncts,
        key=lambda p: (predicate_selectivity(p) - 1.0) / predicate_weight(p),
    )
    report = plan(query, None, [TableStats("customers", 500)])
    assert report.estimated_cost == pytest.approx(chain_cost(ranked))
