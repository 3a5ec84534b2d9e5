"""In-memory toy database: bag-semantics evaluation and equivalence checking."""

from pgstudio.minidb.relation import MiniDb, Relation, bag_of, bags_equal
from pgstudio.minidb.evaluate import (
    EvalError,
    SubqueryCardinality,
    TypeMismatch,
    UnknownColumn,
    UnknownTable,
    eval_select,
)
from pgstudio.minidb.equivalence import (
    ColumnProfile,
    EquivalenceVerdict,
    TableProfile,
    assert_equivalent,
    generate_db,
    profiles_from_catalog,
)

__all__ = [
    "ColumnProfile",
    "EquivalenceVerdict",
    "EvalError",
    "MiniDb",
    "Relation",
    "SubqueryCardinality",
    "TableProfile",
    "TypeMismatch",
    "UnknownColumn",
    "UnknownTable",
    "assert_equivalent",
    "bag_of",
    "bags_equal",
    "eval_select",
    "generate_db",
    "profiles_from_catalog",
]
