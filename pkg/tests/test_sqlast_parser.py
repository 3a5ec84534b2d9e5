"""Parser behaviour: the round-trip corpus, precedence, and plain-language errors."""

import pytest

from pgstudio.sqlast import (
    BaseTable,
    BinaryOp,
    ColumnRef,
    Constant,
    FuncCall,
    LogicalNot,
    ParseError,
    RowConstructor,
    ScalarSubquery,
    SelectQuery,
    Star,
    explain_error,
    normalize,
    parse_select,
    render_select,
)

# Wide net over the supported subset. Every entry must parse, render
# canonically, and survive parse(render(q)) with an identical normal form.
ROUND_TRIP_CORPUS = [
    "SELECT * FROM customers;",
    "SELECT name FROM customers",
    "SELECT name, age FROM customers;",
    "SELECT DISTINCT city FROM customers;",
    "SELECT DISTINCT a, b FROM t WHERE a = b ORDER BY a;",
    "SELECT name AS customer_name FROM customers;",
    "SELECT name customer_name FROM customers;",
    "SELECT customers.name FROM customers;",
    "SELECT c.name FROM customers AS c;",
    "SELECT c.name FROM customers c;",
    "SELECT * FROM myschema.orders;",
    "SELECT SSN, address FROM Customers WHERE credit_score (SSN) >600 AND education='College';",
    "SELECT * FROM t WHERE a = 1;",
    "SELECT * FROM t WHERE a <> 1;",
    "SELECT * FROM t WHERE a != 1;",
    "SELECT * FROM t WHERE a < 1 OR b > 2;",
    "SELECT * FROM t WHERE a <= 1 AND b >= 2;",
    "SELECT * FROM t WHERE a = 1 AND b = 2 AND c = 3;",
    "SELECT * FROM t WHERE a = 1 OR b = 2 AND c = 3;",
    "SELECT * FROM t WHERE (a = 1 OR b = 2) AND c = 3;",
    "SELECT * FROM t WHERE NOT a = 1;",
    "SELECT * FROM t WHERE NOT (a = 1 OR b = 2);",
    "SELECT * FROM t WHERE NOT NOT a = 1;",
    "SELECT * FROM t WHERE a + b * c = 7;",
    "SELECT * FROM t WHERE (a + b) * c = 7;",
    "SELECT * FROM t WHERE a - b - c = 0;",
    "SELECT * FROM t WHERE a - (b - c) = 0;",
    "SELECT * FROM t WHERE a / b % c = 1;",
    "SELECT * FROM t WHERE a & 3 = 1;",
    "SELECT * FROM t WHERE a | b = 3;",
    "SELECT * FROM t WHERE a # b = 1;",
    "SELECT * FROM t WHERE a << 2 = 4;",
    "SELECT * FROM t WHERE a >> 1 = 2;",
    "SELECT * FROM t WHERE price = 1.5;",
    "SELECT * FROM t WHERE price = -2;",
    "SELECT * FROM t WHERE note = 'it''s fine';",
    "SELECT * FROM t WHERE active = TRUE;",
    "SELECT * FROM t WHERE deleted = FALSE;",
    "SELECT * FROM t WHERE note = NULL;",
    "SELECT COUNT(*) FROM orders;",
    "SELECT COUNT(id) FROM orders;",
    "SELECT SUM(total), AVG(total) FROM orders;",
    "SELECT MIN(a), MAX(b) FROM t;",
    "SELECT city, COUNT(*) FROM customers GROUP BY city;",
    "SELECT city, COUNT(*) AS n FROM customers GROUP BY city HAVING COUNT(*) > 5;",
    "SELECT city, state, COUNT(*) FROM customers GROUP BY city, state;",
    "SELECT city FROM customers GROUP BY city HAVING city <> 'Oslo' AND COUNT(*) > 1;",
    "SELECT name FROM customers WHERE age > 30 GROUP BY name HAVING COUNT(*) > 1 ORDER BY name DESC;",
    "SELECT * FROM t ORDER BY a;",
    "SELECT * FROM t ORDER BY a ASC;",
    "SELECT * FROM t ORDER BY a DESC;",
    "SELECT * FROM t ORDER BY a DESC, b;",
    "SELECT o.id, c.name FROM orders o JOIN customers c ON o.customer_id = c.id;",
    "SELECT o.id FROM orders o INNER JOIN customers c ON o.customer_id = c.id WHERE c.city = 'Oslo';",
    "SELECT a FROM t JOIN s ON t.id = s.id JOIN r ON s.id = r.id;",
    "SELECT x.n FROM (SELECT n FROM t) x;",
    "SELECT x.n FROM (SELECT n FROM t WHERE n > 0) AS x WHERE x.n < 10;",
    "SELECT a FROM t UNION SELECT a FROM s;",
    "SELECT a FROM t UNION ALL SELECT a FROM s;",
    "SELECT a FROM t UNION SELECT a FROM s UNION ALL SELECT a FROM r;",
    "SELECT a FROM t UNION SELECT a FROM s ORDER BY a;",
    "SELECT col1 FROM tablename1 WHERE (col2, col3) = (SELECT MAX (col2), MAX (col3) FROM tablename2) AND col4 = testvalue1;",
    "SELECT name FROM products WHERE price = (SELECT MAX(price) FROM products);",
    'SELECT "Weird Name" FROM "Mixed Case";',
    'SELECT "select" FROM t;',
]


@pytest.mark.parametrize("source", ROUND_TRIP_CORPUS)
def test_round_trip_corpus(source):
    """normalize(parse(render(q))) == normalize(q), and rendering is stable."""
    query = parse_select(source)
    canonical = render_select(query)
    reparsed = parse_select(canonical.text)
    assert normalize(reparsed) == normalize(query)
    assert render_select(reparsed).text == canonical.text
    assert canonical.text.endswith(";")
    assert "\n" not in canonical.text


def test_unquoted_identifiers_fold_to_lowercase():
    query = parse_select("SELECT SSN FROM Customers;")
    assert query.select[0].expr == ColumnRef("ssn")
    assert query.from_table == BaseTable("customers")


def test_quoted_identifiers_keep_their_case():
    query = parse_select('SELECT "SSN" FROM t;')
    assert query.select[0].expr == ColumnRef("SSN")


def test_not_equals_spellings_agree():
    a = parse_select("SELECT * FROM t WHERE a <> 1;")
    b = parse_select("SELECT * FROM t WHERE a != 1;")
    assert normalize(a) == normalize(b)


def test_precedence_or_binds_loosest():
    query = parse_select("SELECT * FROM t WHERE a = 1 OR b = 2 AND c = 3;")
    where = query.where
    assert isinstance(where, BinaryOp) and where.op == "OR"
    assert isinstance(where.rhs, BinaryOp) and where.rhs.op == "AND"


def test_precedence_not_over_comparison():
    query = parse_select("SELECT * FROM t WHERE NOT a = 1 AND b = 2;")
    where = query.where
    assert isinstance(where, BinaryOp) and where.op == "AND"
    assert isinstance(where.lhs, LogicalNot)
    assert isinstance(where.lhs.operand, BinaryOp)
    assert where.lhs.operand.op == "="


def test_precedence_multiplication_over_addition():
    query = parse_select("SELECT * FROM t WHERE a + b * c = 7;")
    comparison = query.where
    assert isinstance(comparison.lhs, BinaryOp) and comparison.lhs.op == "+"
    assert isinstance(comparison.lhs.rhs, BinaryOp) and comparison.lhs.rhs.op == "*"


def test_count_star_parses_to_star_call():
    query = parse_select("SELECT COUNT(*) FROM t;")
    assert query.select[0].expr == FuncCall("count", star=True)


def test_row_comparison_against_subquery():
    query = parse_select(
        "SELECT col1 FROM t1 WHERE (col2, col3) = (SELECT MAX(col2), MAX(col3) FROM t2);"
    )
    where = query.where
    assert isinstance(where.lhs, RowConstructor)
    assert len(where.lhs.items) == 2
    assert isinstance(where.rhs, ScalarSubquery)


def test_trailing_semicolon_is_optional():
    assert normalize(parse_select("SELECT a FROM t")) == normalize(parse_select("SELECT a FROM t;"))


def test_select_star_shape():
    query = parse_select("SELECT * FROM t;")
    assert isinstance(query.select, Star)


def test_order_by_after_union_attaches_to_whole_chain():
    query = parse_select("SELECT a FROM t UNION SELECT a FROM s ORDER BY a;")
    assert query.order_by and query.set_op is not None
    assert query.set_op.query.order_by == ()


# --- errors -----------------------------------------------------------------

MALFORMED_CORPUS = [
    "",
    "WHERE a = 1;",
    "SELECT name, age customers WHERE age > 30;",
    "SELECT * customers;",
    "SELECT name FROM customers WHERE name = 'Al",
    "SELECT name FROM customers;;",
    "SELECT a b c FROM t;",
    "SELECT (a + b FROM t;",
    "SELECT * FROM t WHERE a = = 1;",
    "SELECT * FROM t WHERE a = 1 = 2;",
    "SELECT * FROM;",
    "SELECT * FROM t WHERE name = $bad;",
    "SELECT SUM(*) FROM t;",
    "SELECT a, FROM t;",
    "SELECT * FROM t WHERE;",
    "SELECT * FROM t GROUP BY;",
    "SELECT FROM t;",
    "SELECT * FROM t ORDER a;",
    "SELECT * FROM (SELECT a FROM t);",
]

_JARGON = ["expected token", "nonterminal", "non-terminal", "::=", "lexeme",
           "parse tree", "grammar", "terminal symbol", "production"]


@pytest.mark.parametrize("source", MALFORMED_CORPUS)
def test_malformed_inputs_raise_plain_spoken_errors(source):
    with pytest.raises(ParseError) as exc:
        parse_select(source)
    error = exc.value
    assert error.plain_message.strip()
    lowered = error.plain_message.lower()
    for word in _JARGON:
        assert word not in lowered, f"jargon {word!r} leaked into: {error.plain_message}"
    start, end = error.span
    assert 0 <= start <= end <= len(source)
    paragraph = explain_error(error, source)
    assert error.plain_message in paragraph
    if error.hint:
        assert error.hint.rstrip(".") in paragraph


def test_missing_from_suggests_adding_it():
    with pytest.raises(ParseError) as exc:
        parse_select("SELECT name, age customers WHERE age > 30;")
    assert "FROM" in exc.value.plain_message
    assert "add FROM before the table name" in (exc.value.hint or "")
    # The span points at the word that was probably meant as the table.
    start, end = exc.value.span
    assert "SELECT name, age customers WHERE age > 30;"[start:end] == "customers"


def test_star_select_with_missing_from_also_points_at_table():
    with pytest.raises(ParseError) as exc:
        parse_select("SELECT * customers;")
    assert "add FROM before the table name" in (exc.value.hint or "")


def test_double_semicolon_mentions_single_semicolon():
    with pytest.raises(ParseError) as exc:
        parse_select("SELECT name FROM customers;;")
    assert "semicolon" in exc.value.plain_message.lower()


def test_chained_comparison_suggests_and():
    with pytest.raises(ParseError) as exc:
        parse_select("SELECT * FROM t WHERE a = 1 = 2;")
    assert "AND" in (exc.value.hint or "")


def test_unbalanced_parenthesis_hint():
    with pytest.raises(ParseError) as exc:
        parse_select("SELECT (a + b FROM t;")
    assert "parenthesis" in (exc.value.hint or "").lower()


def test_error_for_derived_table_without_alias():
    with pytest.raises(ParseError) as exc:
        parse_select("SELECT * FROM (SELECT a FROM t);")
    assert "name" in exc.value.plain_message.lower()
