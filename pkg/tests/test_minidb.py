"""Evaluator semantics, pinned against hand-computed results."""

import random

import pytest

from pgstudio.minidb import (
    ColumnProfile,
    MiniDb,
    Relation,
    SubqueryCardinality,
    TableProfile,
    TypeMismatch,
    assert_equivalent,
    bags_equal,
    eval_select,
    generate_db,
)
from pgstudio.minidb.evaluate import AmbiguousColumn, DivisionByZero, EvalError, UnknownTable
from pgstudio.sqlast import parse_select


def db_people():
    return MiniDb(
        {
            "people": Relation(
                ("id", "name", "age", "city"),
                [
                    (1, "ada", 30, "oslo"),
                    (2, "bo", None, "oslo"),
                    (3, "cy", 20, "bergen"),
                    (4, "dee", 30, None),
                ],
            )
        }
    )


def rows(sql, db):
    return eval_select(parse_select(sql), db).rows


def test_projection_and_star():
    db = db_people()
    assert rows("SELECT name FROM people;", db) == [("ada",), ("bo",), ("cy",), ("dee",)]
    assert rows("SELECT * FROM people;", db) == db.table("people").rows


def test_where_equality_and_three_valued_logic():
    db = db_people()
    # age of bo is NULL: the comparison is unknown, so the row is dropped
    assert rows("SELECT id FROM people WHERE age = 30;", db) == [(1,), (4,)]
    assert rows("SELECT id FROM people WHERE age <> 30;", db) == [(3,)]
    # NULL = NULL is unknown, not true
    assert rows("SELECT id FROM people WHERE age = NULL;", db) == []


def test_not_of_unknown_stays_unknown():
    db = db_people()
    assert rows("SELECT id FROM people WHERE NOT age = 30;", db) == [(3,)]


def test_and_or_kleene_tables():
    db = db_people()
    # unknown OR true is true: bo keeps its row through the second arm
    assert rows("SELECT id FROM people WHERE age = 30 OR city = 'oslo';", db) == [(1,), (2,), (4,)]
    # unknown AND true is unknown: bo is dropped
    assert rows("SELECT id FROM people WHERE age = 30 AND city = 'oslo';", db) == [(1,)]


def test_arithmetic_truncates_toward_zero():
    db = MiniDb({"t": Relation(("a", "b"), [(7, 2), (-7, 2)])})
    assert rows("SELECT a / b FROM t;", db) == [(3,), (-3,)]
    assert rows("SELECT a % b FROM t;", db) == [(1,), (-1,)]


def test_division_by_zero_is_an_error():
    db = MiniDb({"t": Relation(("a",), [(1,)])})
    with pytest.raises(DivisionByZero):
        rows("SELECT a / 0 FROM t;", db)


def test_comparing_text_with_number_is_a_type_error():
    db = MiniDb({"t": Relation(("a",), [("x",)])})
    with pytest.raises(TypeMismatch):
        rows("SELECT * FROM t WHERE a = 1;", db)


def test_aggregates_ignore_nulls_except_count_star():
    db = db_people()
    assert rows("SELECT COUNT(*) FROM people;", db) == [(4,)]
    assert rows("SELECT COUNT(age) FROM people;", db) == [(3,)]
    assert rows("SELECT SUM(age), MIN(age), MAX(age) FROM people;", db) == [(80, 20, 30)]
    # AVG divides by the non-null count
    assert rows("SELECT AVG(age) FROM people;", db) == [(80 / 3,)]


def test_aggregate_over_empty_table_yields_one_row():
    db = MiniDb({"t": Relation(("a",), [])})
    assert rows("SELECT COUNT(*) FROM t;", db) == [(0,)]
    assert rows("SELECT SUM(a) FROM t;", db) == [(None,)]


def test_group_by_and_having():
    db = db_people()
    grouped = rows("SELECT city, COUNT(*) FROM people GROUP BY city;", db)
    assert sorted(grouped, key=str) == sorted([("oslo", 2), ("bergen", 1), (None, 1)], key=str)
    kept = rows("SELECT city FROM people GROUP BY city HAVING COUNT(*) > 1;", db)
    assert kept == [("oslo",)]


def test_group_key_may_be_null_and_groups_like_a_value():
    db = db_people()
    result = rows("SELECT city, COUNT(*) FROM people GROUP BY city HAVING COUNT(*) = 1;", db)
    assert sorted(result, key=str) == sorted([("bergen", 1), (None, 1)], key=str)


def test_ungrouped_column_in_select_is_an_error():
    db = db_people()
    with pytest.raises(EvalError):
        rows("SELECT name, COUNT(*) FROM people GROUP BY city;", db)


def test_distinct_collapses_duplicates_and_treats_nulls_equal():
    db = MiniDb({"t": Relation(("a",), [(1,), (1,), (None,), (None,), (2,)])})
    assert rows("SELECT DISTINCT a FROM t;", db) == [(1,), (None,), (2,)]


def test_order_by_directions_and_null_placement():
    db = db_people()
    ascending = rows("SELECT age FROM people ORDER BY age;", db)
    assert ascending == [(20,), (30,), (30,), (None,)]
    descending = rows("SELECT age FROM people ORDER BY age DESC;", db)
    assert descending == [(None,), (30,), (30,), (20,)]


def test_order_by_does_not_change_the_bag():
    db = db_people()
    plain = eval_select(parse_select("SELECT name FROM people;"), db)
    ordered = eval_select(parse_select("SELECT name FROM people ORDER BY name DESC;"), db)
    assert bags_equal(plain, ordered)
    assert plain.rows != ordered.rows


def test_order_by_secondary_key_is_stable():
    db = MiniDb({"t": Relation(("a", "b"), [(1, "x"), (2, "y"), (1, "y"), (2, "x")])})
    result = rows("SELECT a, b FROM t ORDER BY a, b DESC;", db)
    assert result == [(1, "y"), (1, "x"), (2, "y"), (2, "x")]


def test_inner_join_matches_and_drops_null_keys():
    db = MiniDb(
        {
            "orders": Relation(("oid", "customer_id"), [(1, 10), (2, 20), (3, None)]),
            "customers": Relation(("id", "name"), [(10, "ada"), (30, "cy")]),
        }
    )
    result = rows(
        "SELECT oid, name FROM orders JOIN customers ON customer_id = id;", db
    )
    assert result == [(1, "ada")]


def test_join_with_ambiguous_bare_column_errors():
    db = MiniDb(
        {
            "a": Relation(("id", "v"), [(1, 2)]),
            "b": Relation(("id", "w"), [(1, 3)]),
        }
    )
    with pytest.raises(AmbiguousColumn):
        rows("SELECT id FROM a JOIN b ON a.id = b.id;", db)
    # qualification resolves it
    assert rows("SELECT a.id FROM a JOIN b ON a.id = b.id;", db) == [(1,)]


def test_star_over_join_expands_both_tables():
    db = MiniDb(
        {
            "a": Relation(("x",), [(1,)]),
            "b": Relation(("y",), [(2,), (3,)]),
        }
    )
    assert rows("SELECT * FROM a JOIN b ON x < y;", db) == [(1, 2), (1, 3)]


def test_derived_table():
    db = db_people()
    result = rows("SELECT n FROM (SELECT name AS n FROM people WHERE age = 30) x;", db)
    assert result == [("ada",), ("dee",)]


def test_scalar_subquery_value_and_empty_and_cardinality():
    db = MiniDb(
        {
            "t": Relation(("a",), [(1,), (5,), (3,)]),
            "empty": Relation(("a",), []),
        }
    )
    assert rows("SELECT a FROM t WHERE a = (SELECT MAX(a) FROM t);", db) == [(5,)]
    # an empty subquery reads as NULL, so nothing matches
    assert rows("SELECT a FROM t WHERE a = (SELECT a FROM empty);", db) == []
    with pytest.raises(SubqueryCardinality):
        rows("SELECT a FROM t WHERE a = (SELECT a FROM t);", db)


def test_row_comparison_with_subquery():
    db = MiniDb(
        {
            "t1": Relation(("c1", "c2", "c3"), [(1, 5, 7), (2, 5, 9), (3, 4, 9)]),
        }
    )
    result = rows(
        "SELECT c1 FROM t1 WHERE (c2, c3) = (SELECT MAX(c2), MAX(c3) FROM t1);", db
    )
    assert result == [(2,)]


def test_union_removes_duplicates_union_all_keeps_them():
    db = MiniDb(
        {
            "t": Relation(("a",), [(1,), (2,)]),
            "s": Relation(("a",), [(2,), (3,)]),
        }
    )
    assert sorted(rows("SELECT a FROM t UNION SELECT a FROM s;", db)) == [(1,), (2,), (3,)]
    assert sorted(rows("SELECT a FROM t UNION ALL SELECT a FROM s;", db)) == [
        (1,), (2,), (2,), (3,),
    ]


def test_union_also_dedupes_within_one_side():
    db = MiniDb(
        {
            "t": Relation(("a",), [(1,), (1,)]),
            "s": Relation(("a",), []),
        }
    )
    assert rows("SELECT a FROM t UNION SELECT a FROM s;", db) == [(1,)]
    assert rows("SELECT a FROM t UNION ALL SELECT a FROM s;", db) == [(1,), (1,)]


def test_order_by_after_union_sorts_combined_result():
    db = MiniDb(
        {
            "t": Relation(("a",), [(3,), (1,)]),
            "s": Relation(("a",), [(2,)]),
        }
    )
    assert rows("SELECT a FROM t UNION ALL SELECT a FROM s ORDER BY a;", db) == [(1,), (2,), (3,)]


def test_missing_table_reports_unknown_table():
    with pytest.raises(UnknownTable):
        rows("SELECT * FROM ghost;", MiniDb())


def test_fixture_round_trip():
    db = db_people()
    restored = MiniDb.load_json(db.dump_json())
    assert restored.to_fixture() == db.to_fixture()


# --- generator and equivalence ---------------------------------------------------

PROFILE = (
    TableProfile(
        "t",
        (
            ColumnProfile("id", kind="int", nullable=False, unique=True),
            ColumnProfile("v", kind="int"),
            ColumnProfile("w", kind="text"),
        ),
    ),
)


def test_generator_is_seed_deterministic():
    a = generate_db(PROFILE, random.Random(7))
    b = generate_db(PROFILE, random.Random(7))
    assert a.to_fixture() == b.to_fixture()


def test_generator_respects_size_bounds_and_constraints():
    for seed in range(30):
        db = generate_db(PROFILE, random.Random(seed))
        relation = db.table("t")
        assert 0 <= len(relation.rows) <= 20
        ids = [r[0] for r in relation.rows]
        assert None not in ids
        assert len(set(ids)) == len(ids)


def test_generator_modes():
    rng = random.Random(3)
    assert generate_db(PROFILE, rng, "empty").table("t").rows == []
    dup = generate_db(PROFILE, rng, "duplicates").table("t")
    non_unique = [(r[1], r[2]) for r in dup.rows]
    assert len(set(non_unique)) == 1, "duplicates mode repeats the non-unique values"


def test_equivalence_accepts_an_identity_pair():
    q = parse_select("SELECT v FROM t WHERE v > 2;")
    verdict = assert_equivalent(q, q, PROFILE, seed=1, trials=25)
    assert verdict.equivalent
    assert verdict.trials_run == 25


def test_equivalence_finds_union_counterexample():
    a = parse_select("SELECT v FROM t UNION SELECT v FROM t;")
    b = parse_select("SELECT v FROM t UNION ALL SELECT v FROM t;")
    verdict = assert_equivalent(a, b, PROFILE, seed=1, trials=50)
    assert not verdict.equivalent
    assert verdict.counterexample is not None
    # the counterexample really does tell them apart
    left = eval_select(a, verdict.counterexample)
    right = eval_select(b, verdict.counterexample)
    assert not bags_equal(left, right)


def test_equivalence_catches_distinct_dropped_on_nullable_unique_column():
    # nullable unique column: two NULLs survive DISTINCT as one row
    profile = (
        TableProfile("t", (ColumnProfile("u", kind="int", nullable=True, unique=False),)),
    )
    a = parse_select("SELECT DISTINCT u FROM t;")
    b = parse_select("SELECT u FROM t;")
    verdict = assert_equivalent(a, b, profile, seed=2, trials=50)
    assert not verdict.equivalent
